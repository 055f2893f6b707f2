#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "crossplace/approx_engine.hpp"
#include "crossplace/experiments.hpp"
#include "crossplace/farey.hpp"
#include "crossplace/hausdorff.hpp"

// JSON views of the library's reports. Exact quantities always appear as
// "num/den" strings.

namespace crossplace {

using Json = nlohmann::ordered_json;

Json to_json(const Rational& q);
Json to_json(const std::optional<Rational>& q);
Json to_json(const SourceSpec& spec);
Json to_json(const MomentReport& r);
Json to_json(const SolutionRecord& r);
Json to_json(const DeltaResult& r);
Json to_json(const PairCountReport& r);
Json to_json(const DichotomyReport& r);
Json to_json(const PaleyZygmundReport& r);
Json to_json(const BoxCountReport& r);
Json to_json(const CoverSumReport& r);
Json to_json(const TrialConfig& c);

void write_totient_csv(std::ostream& out, const std::vector<TotientRow>& rows);
void write_dichotomy_csv(std::ostream& out, const DichotomyReport& r, const std::vector<std::int64_t>& grid);
void write_paley_zygmund_csv(std::ostream& out, const PaleyZygmundReport& r);
void write_box_count_csv(std::ostream& out, const BoxCountReport& r);
void write_cover_csv(std::ostream& out, const std::vector<CoverSumReport>& rows);

}  // namespace crossplace
