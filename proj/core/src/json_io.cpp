#include "qpdyn/json_io.hpp"

#include <sstream>

namespace qpdyn {

Json to_json(const ExistenceVerdict& v) {
    Json j;
    j["exists"] = v.exists;
    j["case_tag"] = to_string(v.case_tag);
    if (v.witness) {
        j["witness"] = *v.witness;
    } else {
        j["witness"] = nullptr;
    }
    return j;
}

Json to_json(const NormValue& n, std::int64_t p) { return n.str(p); }

Json to_json(const FixedPointRecord& r, std::int64_t p) {
    Json j;
    j["which"] = to_string(r.which);
    j["value"] = r.value.compact();
    j["multiplier"] = r.multiplier.compact();
    j["multiplier_norm"] = r.multiplier_norm.str(p);
    if (r.norm_is_upper_bound) j["multiplier_norm_is_upper_bound"] = true;
    j["kind"] = to_string(r.kind);
    return j;
}

Json to_json(const FixedPointSet& s, std::int64_t p) {
    Json j;
    j["records"] = Json::array();
    for (const auto& r : s.records) j["records"].push_back(to_json(r, p));
    j["sqrt_a2p4"] = to_json(s.verdict);
    j["existence_undecided"] = s.existence_undecided;
    if (!s.note.empty()) j["note"] = s.note;
    return j;
}

Json to_json(const OrbitFate& f) {
    Json j;
    j["outcome"] = to_string(f.kind);
    if (f.target) j["target"] = to_string(*f.target);
    if (f.siegel_log_radius) j["siegel_log_radius"] = *f.siegel_log_radius;
    if (f.cycle_period) j["cycle_period"] = *f.cycle_period;
    if (f.cycle_entry) j["cycle_entry"] = *f.cycle_entry;
    if (f.reason) {
        j["reason"] = *f.reason == UndecidedReason::MaxIterations ? "max_iterations"
                                                                  : "precision_exhausted";
    }
    j["steps_used"] = f.steps_used;
    j["certificate"] = f.certificate;
    return j;
}

Json to_json(const HittingTimeRecord& r) {
    Json j;
    j["point"] = r.point.compact();
    if (r.time) {
        j["T"] = *r.time;
    } else {
        j["T"] = nullptr;
    }
    j["bound_used"] = r.bound_used;
    if (r.undetermined) j["undetermined"] = true;
    return j;
}

Json to_json(const SiegelReport& r, std::int64_t p) {
    Json j;
    j["fixed_point"] = to_json(r.fixed_point, p);
    j["per_radius"] = Json::array();
    for (const auto& rr : r.per_radius) {
        Json e;
        e["log_radius"] = rr.log_radius;
        e["verdict"] = to_string(rr.verdict);
        if (rr.counterexample) e["counterexample"] = rr.counterexample->compact();
        j["per_radius"].push_back(e);
    }
    j["boundary"] = to_string(r.boundary_conclusion);
    return j;
}

Json to_json(const BasinScanResult& r) {
    Json j;
    j["counts"] = Json::object();
    for (const auto& [k, v] : r.counts) j["counts"][k] = v;
    j["fates"] = Json::array();
    for (const auto& [pt, fate] : r.fates) {
        Json e;
        e["point"] = pt.compact();
        e["fate"] = to_json(fate);
        j["fates"].push_back(e);
    }
    return j;
}

Json to_json(const ClaimReport& r) {
    Json j;
    j["claim_id"] = r.claim_id;
    j["p"] = r.p;
    j["a"] = r.a_compact;
    j["status"] = to_string(r.status);
    if (!r.reason.empty()) j["reason"] = r.reason;
    j["counts"] = Json::object();
    for (const auto& [k, v] : r.counts) j["counts"][k] = v;
    j["witnesses"] = Json::array();
    for (const auto& [pt, obs] : r.witnesses) {
        Json w;
        w["point"] = pt;
        w["observation"] = obs;
        j["witnesses"].push_back(w);
    }
    return j;
}

Json to_json(const SuiteResult& r) {
    Json j;
    j["suite"] = r.suite;
    j["claims"] = Json::array();
    for (const auto& c : r.reports) j["claims"].push_back(to_json(c));
    j["failures"] = r.failures;
    j["skipped"] = r.skipped;
    return j;
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

}  // namespace

std::string scan_csv(const BasinScanResult& r) {
    std::ostringstream os;
    os << "point,valuation,fate,steps\n";
    for (const auto& [pt, fate] : r.fates) {
        std::string v = pt.is_regular() ? std::to_string(pt.valuation()) : "";
        os << csv_escape(pt.compact()) << "," << v << "," << to_string(fate.kind) << ","
           << fate.steps_used << "\n";
    }
    return os.str();
}

std::string suite_csv(const SuiteResult& r) {
    std::ostringstream os;
    os << "claim_id,p,a,verdict,witnesses\n";
    for (const auto& c : r.reports) {
        os << csv_escape(c.claim_id) << "," << c.p << "," << csv_escape(c.a_compact) << ","
           << to_string(c.status) << "," << c.witnesses.size() << "\n";
    }
    return os.str();
}

}  // namespace qpdyn
