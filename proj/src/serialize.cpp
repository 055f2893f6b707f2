#include "crossplace/serialize.hpp"

#include <iomanip>
#include <sstream>

namespace crossplace {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

Json to_json(const Rational& q) { return q.to_string(); }

Json to_json(const std::optional<Rational>& q) { return q ? to_json(*q) : Json(nullptr); }

Json to_json(const SourceSpec& spec) {
  return Json{{"ball", spec.ball.to_string()},
              {"ball_kind", spec.ball.is_padic() ? "padic" : "arc"},
              {"target", spec.target.to_string()},
              {"coprimality_filter", spec.coprimality_filter}};
}

Json to_json(const MomentReport& r) {
  return Json{{"N", r.N},  {"Psi", to_json(r.Psi)},       {"Psi_value", r.Psi_value},
              {"M1", to_json(r.M1)}, {"M2sq", to_json(r.M2sq)}, {"c1", r.c1}};
}

Json to_json(const SolutionRecord& r) {
  Json j{{"n", r.n}, {"a", r.a}};
  if (const auto* v = std::get_if<DistanceValuation>(&r.distance)) {
    j["valuation"] = v->value;
    j["valuation_at_least"] = v->at_least;
  } else {
    j["gap"] = to_json(std::get<Rational>(r.distance));
  }
  j["threshold"] = r.threshold;
  j["strict"] = r.strict;
  return j;
}

Json to_json(const DeltaResult& r) {
  Json records = Json::array();
  for (const auto& rec : r.records) records.push_back(to_json(rec));
  return Json{{"strict_count", r.strict_count},
              {"closed_count", r.closed_count},
              {"boundary", r.boundary()},
              {"records", records}};
}

Json to_json(const PairCountReport& r) {
  Json j{{"n", r.n}, {"m", r.m}, {"count", r.count}, {"coincident", r.coincident}, {"bound", to_json(r.bound)}, {"within_bound", r.within_bound}};
  if (r.diagonal_bound) {
    j["diagonal_bound"] = to_json(*r.diagonal_bound);
    j["within_diagonal_bound"] = r.within_diagonal_bound;
  }
  return j;
}

Json to_json(const DichotomyReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json tails = Json::object();
    for (std::size_t k = 0; k < kTailLevels.size(); ++k) {
      tails[std::to_string(kTailLevels[k])] = row.tail_fraction[k];
    }
    rows.push_back(Json{{"N", row.N},
                        {"mean", row.mean},
                        {"mean_closed", row.mean_closed},
                        {"std_error", row.std_error},
                        {"tail_fraction", tails},
                        {"Psi", to_json(row.Psi)},
                        {"Psi_value", row.Psi_value},
                        {"exact_mean", to_json(row.exact_mean)}});
  }
  return Json{{"verdict", to_string(r.verdict)},
              {"slope", r.slope},
              {"intercept", r.intercept},
              {"r_squared", r.r_squared},
              {"fitted_c", r.fitted_c},
              {"exhaustive", r.exhaustive},
              {"samples", r.samples},
              {"rows", rows}};
}

Json to_json(const PaleyZygmundReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back(Json{{"lambda", to_json(row.lambda)},
                        {"c2", row.c2},
                        {"predicted", to_json(row.predicted)},
                        {"empirical", to_json(row.empirical)},
                        {"holds", row.holds}});
  }
  return Json{{"moments", to_json(r.moments)},
              {"precision", r.precision},
              {"convention", "closed"},
              {"all_hold", r.all_hold},
              {"rows", rows}};
}

Json to_json(const BoxCountReport& r) {
  Json scales = Json::array();
  for (const auto& s : r.scales) {
    scales.push_back(Json{{"level", s.level},
                          {"radius", s.radius},
                          {"h0", s.h0},
                          {"h", s.h},
                          {"boxes", s.boxes},
                          {"count", s.count},
                          {"used", s.used}});
  }
  return Json{{"tau", to_json(r.tau)},
              {"target_dim", r.target_dim},
              {"fit", Json{{"slope", r.fit.slope},
                           {"intercept", r.fit.intercept},
                           {"residual", r.fit.residual},
                           {"r_squared", r.fit.r_squared}}},
              {"scales", scales}};
}

Json to_json(const CoverSumReport& r) {
  const auto total = r.total();
  return Json{{"N", r.N},
              {"N_max", r.N_max},
              {"rho", r.rho},
              {"partial", r.partial},
              {"partial_exact", to_json(r.partial_exact)},
              {"tail_bound", r.tail_bound ? Json(*r.tail_bound) : Json(nullptr)},
              {"total", total ? Json(*total) : Json(nullptr)},
              {"divergent", r.divergent},
              {"tail_bound_available", r.has_tail_bound}};
}

Json to_json(const TrialConfig& c) {
  Json grid = Json::array();
  for (auto n : c.n_grid) grid.push_back(n);
  const char* mode = c.mode == SamplingMode::Auto ? "auto" : (c.mode == SamplingMode::Sampled ? "sampled" : "exhaustive");
  return Json{{"spec", to_json(c.spec)}, {"psi", c.psi.to_string()}, {"sample_count", c.sample_count},
              {"n_grid", grid},          {"seed", c.seed},            {"precision", c.precision},
              {"mode", mode}};
}

// ---------------------------------------------------------------------------

void write_totient_csv(std::ostream& out, const std::vector<TotientRow>& rows) {
  out << "n,phi,phi_b,running_sum\n";
  for (const auto& r : rows) out << r.n << ',' << r.phi << ',' << r.phi_b << ',' << r.running_sum << '\n';
}

void write_dichotomy_csv(std::ostream& out, const DichotomyReport& r, const std::vector<std::int64_t>& grid) {
  out << "sample,N,delta_strict,delta_closed\n";
  for (std::size_t i = 0; i < r.counts.size(); ++i) {
    for (std::size_t g = 0; g < grid.size(); ++g) {
      out << i << ',' << grid[g] << ',' << r.counts[i][g].first << ',' << r.counts[i][g].second << '\n';
    }
  }
}

void write_paley_zygmund_csv(std::ostream& out, const PaleyZygmundReport& r) {
  out << "lambda,c2,predicted,empirical,holds\n";
  for (const auto& row : r.rows) {
    out << row.lambda.to_string() << ',' << fmt(row.c2) << ',' << row.predicted.to_string() << ','
        << row.empirical.to_string() << ',' << (row.holds ? "true" : "false") << '\n';
  }
}

void write_box_count_csv(std::ostream& out, const BoxCountReport& r) {
  out << "level,scale,count,used\n";
  for (const auto& s : r.scales) {
    out << s.level << ',' << fmt(s.radius) << ',' << s.count << ',' << (s.used ? 1 : 0) << '\n';
  }
}

void write_cover_csv(std::ostream& out, const std::vector<CoverSumReport>& rows) {
  out << "N,N_max,rho,partial,tail_bound,total\n";
  for (const auto& r : rows) {
    const auto total = r.total();
    out << r.N << ',' << r.N_max << ',' << fmt(r.rho) << ',' << fmt(r.partial) << ','
        << (r.tail_bound ? fmt(*r.tail_bound) : "") << ',' << (total ? fmt(*total) : "") << '\n';
  }
}

}  // namespace crossplace
