#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ellrank/congruence.hpp"
#include "ellrank/oracle.hpp"
#include "ellrank/predictor.hpp"

namespace ellrank {

struct SurveyOptions {
    std::uint32_t ell = 0;
    PrimePower q;
    unsigned d = 0;
    bool dedupe = true;        // canonical affine-orbit representatives only
    bool with_oracle = false;
    unsigned threads = 0;      // 0 = hardware concurrency
    std::uint64_t seed = 0;
    OracleOptions oracle;
};

struct SurveyRow {
    Poly f;  // class representative
    std::uint32_t gamma = 0;
    std::optional<TSet> tset;
    RankPrediction prediction;
    std::optional<OracleReport> oracle;
    bool consistent = true;  // oracle rank lies in prediction.possible
    std::string error;       // nonempty when this curve failed
    double wall_ms = 0;
};

struct SurveyResult {
    std::uint64_t class_count = 0;
    std::vector<SurveyRow> rows;  // canonical enumeration order
    std::map<std::string, std::uint64_t> tset_histogram;        // "[1,3,4]" -> count
    std::map<std::string, std::uint64_t> prediction_histogram;  // "3" or "{3,5}" -> count
    std::vector<std::string> failures;
    bool any_inconsistent = false;
};

// Key used in the prediction histogram: the exact rank, or the possible set.
std::string prediction_key(const RankPrediction& p);

SurveyResult run_survey(const SurveyOptions& opts);

nlohmann::json row_to_json(const SurveyRow& row);
SurveyRow row_from_json(const nlohmann::json& j, const FieldCtxPtr& field);
nlohmann::json prediction_to_json(const RankPrediction& p);
nlohmann::json oracle_to_json(const OracleReport& rep);

}  // namespace ellrank
