/* Copyright 2026 The detdiag Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef DETDIAG_REPORT_H_
#define DETDIAG_REPORT_H_

#include <filesystem>
#include <string>

#include "detdiag/analysis.h"
#include "json.hpp"

namespace detdiag {

// Shortest round-trip decimal form of v.
std::string FormatNumber(double v);

nlohmann::json SeriesToJson(const FpDistributionSeries& series);
nlohmann::json SensitivityRowToJson(const SensitivityRow& row);
nlohmann::json ConfigToJson(const AnalysisReport& report);
nlohmann::json ReportToJson(const AnalysisReport& report);

// category,Loc,Sim,Oth,BG; one row per category.
std::string FpTypesCsv(const AnalysisReport& report);
// characteristic,subset,normalized_ap,max,min,sensitivity; aggregate rows,
// absent values left empty.
std::string SensitivityCsv(const AnalysisReport& report);
// One row per classified false positive with its evidence.
std::string FpRecordsCsv(const AnalysisReport& report);

// Stacked-area panels of FP type fractions versus prefix size: the merged
// series first, then one per category. The series are embedded as JSON in
// <metadata id="detdiag-data">.
std::string FpDistributionSvg(const AnalysisReport& report);
// Per-characteristic subset normalized AP with max/min markers.
std::string SensitivitySvg(const AnalysisReport& report);

// report.json, fp_types.csv, sensitivity.csv, fp_records.csv,
// fp_distribution.svg and sensitivity.svg. Throws IoError.
void WriteAnalysisOutputs(const AnalysisReport& report,
                          const std::filesystem::path& out_dir);

nlohmann::json ComparisonToJson(const ComparisonReport& cmp);
// Two rows (A on top, B below), each an FP distribution panel and a
// sensitivity chart.
std::string ComparisonSvg(const ComparisonReport& cmp);
// Full analyses under A/ and B/ plus comparison.json and comparison.svg.
void WriteComparisonOutputs(const ComparisonReport& cmp,
                            const std::filesystem::path& out_dir);

// Reads the keys tp_iou, n_ref, cuts, ap_mode, schedule and
// exclude_duplicates over `base`. Throws ParseError or DomainError.
AnalysisConfig ConfigFromJson(const nlohmann::json& doc, AnalysisConfig base);

}  // namespace detdiag

#endif  // DETDIAG_REPORT_H_
