#ifndef TIECONTEST_IO_HPP
#define TIECONTEST_IO_HPP

// JSON contest documents and report serialization. Every floating-point
// number is written with 17 significant digits so output is bit-stable.
//
// Contest document:
//   {"family": "jia-ratio", "params": {"r": 1, "k": 2},
//    "v1": 2, "v2": 1, "q": 0.5, "cost": "linear"}

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "tiecontest/audit.hpp"
#include "tiecontest/contest.hpp"
#include "tiecontest/designer.hpp"
#include "tiecontest/equilibrium.hpp"
#include "tiecontest/oracle.hpp"

namespace tiecontest::io {

using Json = nlohmann::ordered_json;

namespace detail {

inline void write_string(std::ostream& os, const std::string& s) { os << Json(s).dump(); }

inline void write(std::ostream& os, const Json& j, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{' << nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',' << nl;
        first = false;
        os << pad;
        write_string(os, it.key());
        os << (indent > 0 ? ": " : ":");
        write(os, it.value(), indent, depth + 1);
      }
      os << nl << close_pad << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      const bool nested = indent > 0 && std::any_of(j.begin(), j.end(), [](const Json& v) { return v.is_structured(); });
      os << '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) os << (nested ? "," : ", ");
        first = false;
        if (nested) os << nl << pad;
        write(os, v, indent, depth + 1);
      }
      if (nested) os << nl << close_pad;
      os << ']';
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (std::isfinite(v))
        os << tiecontest::detail::fmt_num(v);
      else
        os << "null";
      return;
    }
    default:
      os << j.dump();
  }
}

inline double number_field(const Json& j, const char* key, const char* where) {
  if (!j.contains(key)) throw domain_error(std::string(where) + key + ": missing required field");
  const Json& v = j.at(key);
  if (!v.is_number()) throw domain_error(std::string(where) + key + ": expected a number, got " + v.dump());
  return v.get<double>();
}

}  // namespace detail

/// Writes `j` with 17-significant-digit floats; non-finite values become null.
inline std::string dump(const Json& j, int indent = 2) {
  std::ostringstream os;
  detail::write(os, j, indent, 0);
  os << '\n';
  return os.str();
}

inline ContestSpec spec_from_json(const Json& j) {
  if (!j.is_object()) throw domain_error("spec: expected a JSON object");
  if (!j.contains("family") || !j.at("family").is_string())
    throw domain_error("family: missing or not a string");
  const FamilyKind kind = parse_family(j.at("family").get<std::string>());
  const FamilyInfo& info = family_info(kind);
  double r = 1.0, k = 1.0;
  if (info.uses_r || info.uses_k) {
    if (!j.contains("params") || !j.at("params").is_object())
      throw domain_error("params: missing object with the family parameters");
    const Json& p = j.at("params");
    if (info.uses_r) r = detail::number_field(p, "r", "params.");
    if (info.uses_k) k = detail::number_field(p, "k", "params.");
  }
  const double v1 = detail::number_field(j, "v1", "");
  const double v2 = detail::number_field(j, "v2", "");
  const double q = j.contains("q") ? detail::number_field(j, "q", "") : 0.5;
  std::optional<CostKind> cost;
  if (j.contains("cost")) {
    if (!j.at("cost").is_string()) throw domain_error("cost: expected a string");
    cost = parse_cost(j.at("cost").get<std::string>());
  }
  return ContestSpec(make_family(kind, r, k), v1, v2, q, cost);
}

inline ContestSpec spec_from_string(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw domain_error(std::string("spec: malformed JSON: ") + e.what());
  }
  return spec_from_json(j);
}

/// The document in the caller's original labels.
inline Json spec_to_json(const ContestSpec& spec) {
  Json j;
  j["family"] = std::string(family_info(spec.kind()).name);
  Json params = Json::object();
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, RatioCsf>) {
          params["r"] = c.r();
          params["k"] = c.k();
        } else if constexpr (std::is_same_v<T, DiffCsf>) {
          params["k"] = c.k();
        } else {
          params["r"] = c.r();
        }
      },
      spec.csf());
  j["params"] = params;
  j["v1"] = spec.user_v1();
  j["v2"] = spec.user_v2();
  j["q"] = spec.user_q();
  j["cost"] = to_string(spec.cost_kind());
  return j;
}

inline Json to_json(const Equilibrium& eq) {
  Json j;
  j["x1"] = eq.x1;
  j["x2"] = eq.x2;
  j["beta"] = eq.beta;
  j["total"] = eq.total();
  j["method"] = to_string(eq.method);
  j["residuals"] = Json::array({eq.residuals[0], eq.residuals[1]});
  j["corner_flags"] = Json::array({eq.corner[0], eq.corner[1]});
  j["iterations"] = eq.iterations;
  j["warnings"] = eq.warnings;
  return j;
}

inline Json to_json(const AuditReport& rep) {
  Json j;
  j["family"] = rep.family;
  j["pass"] = rep.all_pass();
  Json conds = Json::array();
  for (const auto& c : rep.conditions) {
    Json cj;
    cj["id"] = c.id;
    cj["pass"] = c.pass;
    cj["worst_violation"] = c.worst_violation;
    cj["witness_theta"] = c.witness_theta ? Json(*c.witness_theta) : Json(nullptr);
    cj["witness_q"] = c.witness_q ? Json(*c.witness_q) : Json(nullptr);
    if (!c.note.empty()) cj["note"] = c.note;
    conds.push_back(cj);
  }
  j["conditions"] = conds;
  j["m"] = rep.m;
  j["M"] = rep.M;
  j["vbar"] = rep.vbar ? Json(*rep.vbar) : Json(nullptr);
  Json g;
  g["spacing"] = rep.grid.spacing;
  g["theta_min"] = rep.grid.theta_min;
  g["theta_max"] = rep.grid.theta_max;
  g["theta_points"] = rep.grid.theta_points;
  g["q_values"] = rep.grid.q_values;
  j["grid"] = g;
  j["disclaimer"] = rep.disclaimer;
  return j;
}

inline Json to_json(const VerificationReport& rep) {
  Json j;
  j["pass"] = rep.pass;
  j["payoff_loss"] = Json::array({rep.payoff_loss[0], rep.payoff_loss[1]});
  j["band"] = Json::array({rep.band[0], rep.band[1]});
  j["best_deviation"] = Json::array({rep.best_deviation[0], rep.best_deviation[1]});
  j["h"] = rep.h;
  j["grid_equilibria"] = rep.grid_equilibria;
  j["nearest_distance"] = rep.nearest_distance;
  j["nearest"] = rep.nearest ? Json::array({rep.nearest->x1, rep.nearest->x2}) : Json(nullptr);
  j["resolution_too_coarse"] = rep.resolution_too_coarse;
  j["zero_convention_used"] = rep.zero_convention_used;
  return j;
}

inline Json to_json(const CurveShape& s) {
  const auto cert = [](const ShapeCertificate& c) {
    Json j;
    j["holds"] = c.holds;
    j["worst_violation"] = c.worst_violation;
    return j;
  };
  Json j;
  j["monotone_decreasing"] = cert(s.monotone_decreasing);
  j["constant"] = cert(s.constant);
  j["linear"] = cert(s.linear);
  j["convex"] = cert(s.convex);
  return j;
}

inline Json to_json(const EffortCurve& c) {
  Json j;
  Json rows = Json::array();
  for (const auto& s : c.samples) {
    Json r;
    r["q"] = s.q;
    r["x1"] = s.x1;
    r["x2"] = s.x2;
    r["R"] = s.R;
    rows.push_back(r);
  }
  j["samples"] = rows;
  j["shape"] = to_json(c.shape);
  j["warnings"] = c.warnings;
  return j;
}

/// Header `q,x1,x2,R`, one row per sample.
inline std::string to_csv(const EffortCurve& c) {
  std::string out = "q,x1,x2,R\n";
  for (const auto& s : c.samples) {
    out += tiecontest::detail::fmt_num(s.q) + ',' + tiecontest::detail::fmt_num(s.x1) + ',' +
           tiecontest::detail::fmt_num(s.x2) + ',' + tiecontest::detail::fmt_num(s.R) + '\n';
  }
  return out;
}

}  // namespace tiecontest::io

#endif  // TIECONTEST_IO_HPP
