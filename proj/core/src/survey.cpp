#include "ellrank/survey.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <sstream>
#include <thread>

#include "ellrank/curve.hpp"
#include "ellrank/errors.hpp"

namespace ellrank {

std::string prediction_key(const RankPrediction& p) {
    if (p.exact) return std::to_string(p.possible.front());
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < p.possible.size(); ++i) {
        if (i) os << ',';
        os << p.possible[i];
    }
    os << '}';
    return os.str();
}

namespace {

SurveyRow survey_one(const SurveyOptions& opts, const Poly& f) {
    auto t0 = std::chrono::steady_clock::now();
    SurveyRow row;
    row.f = f;
    try {
        CurveParams params = validate(opts.ell, opts.q, f);
        row.gamma = params.gamma;
        if (params.gamma >= 2 && params.d % params.gamma == 0) {
            SplitData split = split_conjugates(params, opts.seed);
            row.tset = compute_tset(split).tset;
        }
        row.prediction = predict(params, row.tset, opts.seed);
        if (opts.with_oracle) {
            OracleOptions oo = opts.oracle;
            oo.seed = opts.seed;
            row.oracle = run_oracle(params, oo);
            row.consistent = std::find(row.prediction.possible.begin(), row.prediction.possible.end(),
                                       static_cast<int>(row.oracle->rank)) != row.prediction.possible.end();
        }
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return row;
}

}  // namespace

SurveyResult run_survey(const SurveyOptions& opts) {
    if (opts.d % opts.ell == 0) throw hypothesis_error(Hypothesis::d_not_coprime);
    if (opts.q.q % opts.ell == 0) throw hypothesis_error(Hypothesis::q_not_coprime);
    FieldCtxPtr F = field_for(opts.q, opts.seed);
    mpz_class candidates;
    mpz_pow_ui(candidates.get_mpz_t(), F->size().get_mpz_t(), opts.d);
    if (!candidates.fits_ulong_p() || candidates.get_ui() > (1ull << 26))
        throw resource_limit_error("run_survey: candidate space exceeds the enumeration budget");

    std::vector<Poly> reps;
    {
        MonicIrreducibleRange range(F, opts.d);
        while (auto f = range.next()) {
            if (!opts.dedupe || affine_orbit_canonical(*f) == *f) reps.push_back(*f);
        }
    }

    SurveyResult res;
    res.class_count = reps.size();
    res.rows.resize(reps.size());
    unsigned nthreads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
    nthreads = std::min<unsigned>(nthreads, std::max<std::size_t>(1, reps.size()));
    std::atomic<std::size_t> cursor{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t i = cursor.fetch_add(1);
            if (i >= reps.size()) return;
            res.rows[i] = survey_one(opts, reps[i]);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < nthreads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    for (const auto& row : res.rows) {
        if (!row.error.empty()) {
            res.failures.push_back(row.f.to_string() + ": " + row.error);
            continue;
        }
        if (row.tset) res.tset_histogram[row.tset->to_string()]++;
        res.prediction_histogram[prediction_key(row.prediction)]++;
        if (!row.consistent) res.any_inconsistent = true;
    }
    return res;
}

nlohmann::json prediction_to_json(const RankPrediction& p) {
    nlohmann::json j;
    j["B"] = p.B;
    if (p.Bprime) j["Bprime"] = *p.Bprime;
    j["lower"] = p.lower;
    j["upper"] = p.upper;
    j["parity"] = p.parity;
    j["possible"] = p.possible;
    j["exact"] = p.exact;
    return j;
}

nlohmann::json oracle_to_json(const OracleReport& rep) {
    nlohmann::json j;
    j["h"] = rep.group.h.get_str();
    std::vector<std::string> lp;
    for (const auto& c : rep.L.a) lp.push_back(c.get_str());
    j["l_poly"] = lp;
    std::vector<std::string> divs;
    for (const auto& d : rep.group.divisors) divs.push_back(d.get_str());
    j["divisors"] = divs;
    j["ell_rank"] = rep.rank;
    j["certified"] = rep.group.certified;
    j["wall_time_ms"] = rep.wall_ms;
    return j;
}

nlohmann::json row_to_json(const SurveyRow& row) {
    nlohmann::json j;
    j["f"] = row.f.to_string();
    j["gamma"] = row.gamma;
    if (row.tset) j["tset"] = row.tset->members();
    j["prediction"] = prediction_to_json(row.prediction);
    if (row.oracle) {
        j["oracle"] = oracle_to_json(*row.oracle);
        j["consistent"] = row.consistent;
    }
    if (!row.error.empty()) j["error"] = row.error;
    return j;
}

SurveyRow row_from_json(const nlohmann::json& j, const FieldCtxPtr& field) {
    SurveyRow row;
    row.f = Poly::parse(field, j.at("f").get<std::string>());
    row.gamma = j.at("gamma").get<std::uint32_t>();
    if (j.contains("tset"))
        row.tset = TSet::from_members(row.gamma, j.at("tset").get<std::vector<std::uint32_t>>());
    const auto& p = j.at("prediction");
    row.prediction.B = p.at("B").get<int>();
    if (p.contains("Bprime")) row.prediction.Bprime = p.at("Bprime").get<int>();
    row.prediction.lower = p.at("lower").get<int>();
    row.prediction.upper = p.at("upper").get<int>();
    row.prediction.parity = p.at("parity").get<int>();
    row.prediction.possible = p.at("possible").get<std::vector<int>>();
    row.prediction.exact = p.at("exact").get<bool>();
    if (j.contains("oracle")) {
        const auto& o = j.at("oracle");
        OracleReport rep;
        rep.group.h = mpz_class(o.at("h").get<std::string>());
        for (const auto& s : o.at("l_poly")) rep.L.a.emplace_back(s.get<std::string>());
        rep.L.genus = static_cast<unsigned>((rep.L.a.size() - 1) / 2);
        for (const auto& s : o.at("divisors")) rep.group.divisors.emplace_back(s.get<std::string>());
        rep.rank = o.at("ell_rank").get<unsigned>();
        rep.group.certified = o.at("certified").get<bool>();
        rep.wall_ms = o.at("wall_time_ms").get<double>();
        row.oracle = std::move(rep);
        row.consistent = j.at("consistent").get<bool>();
    }
    if (j.contains("error")) row.error = j.at("error").get<std::string>();
    return row;
}

}  // namespace ellrank
