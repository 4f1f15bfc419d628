#include "respond/domain.hpp"

#include <algorithm>

namespace respond {

int category_rank(ResponseCategory c) {
    switch (c) {
        case ResponseCategory::CR: return 4;
        case ResponseCategory::PR: return 3;
        case ResponseCategory::SD: return 2;
        case ResponseCategory::PD: return 1;
        case ResponseCategory::NE: return 0;
    }
    return 0;
}

bool is_response(ResponseCategory c) {
    return c == ResponseCategory::CR || c == ResponseCategory::PR;
}

std::string to_string(ResponseCategory c) {
    switch (c) {
        case ResponseCategory::CR: return "CR";
        case ResponseCategory::PR: return "PR";
        case ResponseCategory::SD: return "SD";
        case ResponseCategory::PD: return "PD";
        case ResponseCategory::NE: return "NE";
    }
    return "NE";
}

ResponseCategory category_from_string(const std::string& token) {
    if (token == "CR") return ResponseCategory::CR;
    if (token == "PR") return ResponseCategory::PR;
    if (token == "SD") return ResponseCategory::SD;
    if (token == "PD") return ResponseCategory::PD;
    if (token == "NE") return ResponseCategory::NE;
    throw ParseError("unknown response category token '" + token + "'");
}

void validate(const PatientRecord& p) {
    std::vector<std::string> rows;
    if (p.id.empty()) rows.push_back("patient with empty id");
    int prev_day = 0;
    for (const auto& a : p.assessments) {
        if (a.day < 1)
            rows.push_back(p.id + ": assessment day " + std::to_string(a.day) + " < 1");
        if (a.day <= prev_day)
            rows.push_back(p.id + ": assessment days not strictly increasing at day " +
                           std::to_string(a.day));
        if (a.day > p.cutoff_day)
            rows.push_back(p.id + ": assessment day " + std::to_string(a.day) +
                           " beyond cutoff " + std::to_string(p.cutoff_day));
        prev_day = a.day;
    }
    if (p.death_day) {
        if (!p.assessments.empty() && *p.death_day < p.assessments.back().day)
            rows.push_back(p.id + ": death day " + std::to_string(*p.death_day) +
                           " before last assessment");
        if (*p.death_day > p.cutoff_day)
            rows.push_back(p.id + ": death day beyond cutoff");
    }
    for (auto [label, day] : {std::pair<const char*, const std::optional<int>&>{
                                  "new therapy", p.new_therapy_day},
                              {"treatment stop", p.treatment_stop_day}}) {
        if (day && *day > p.cutoff_day)
            rows.push_back(p.id + ": " + label + " day beyond cutoff");
    }
    if (!rows.empty())
        throw ValidationError("invalid patient record " + p.id, rows);
}

std::vector<Assessment> eligible_assessments(const PatientRecord& patient, const BorConfig& cfg) {
    std::vector<Assessment> out;
    bool past_pd = false;
    for (const auto& a : patient.assessments) {
        if (a.day > patient.cutoff_day) break;
        if (cfg.truncate_at_new_therapy && patient.new_therapy_day &&
            a.day >= *patient.new_therapy_day)
            break;
        if (past_pd) break;
        out.push_back(a);
        if (cfg.truncate_at_progression && a.category == ResponseCategory::PD)
            past_pd = true;  // PD itself is retained as the progression marker
    }
    return out;
}

namespace {

// Does the initial response at index i have a qualifying confirmation?
bool confirmed(const std::vector<Assessment>& elig, std::size_t i, const BorConfig& cfg) {
    const auto& initial = elig[i];
    for (std::size_t j = i + 1; j < elig.size(); ++j) {
        if (category_rank(elig[j].category) >= category_rank(initial.category) &&
            elig[j].day - initial.day >= cfg.min_confirmation_gap_days) {
            if (cfg.allow_ne_between_confirmation) return true;
            bool ne_between = false;
            for (std::size_t k = i + 1; k < j; ++k)
                if (elig[k].category == ResponseCategory::NE) ne_between = true;
            if (!ne_between) return true;
        }
    }
    return false;
}

}  // namespace

BorResult derive_bor(const PatientRecord& patient, const BorConfig& cfg) {
    if (!patient.baseline_measurable) throw NotEvaluable(patient.id);
    BorResult r;
    for (const auto& a : patient.assessments) {
        if (a.day <= patient.cutoff_day && a.category == ResponseCategory::PD) {
            r.progression_day = a.day;
            break;
        }
    }
    auto elig = eligible_assessments(patient, cfg);
    // onset = first PR/CR that qualifies under the confirmation rule
    for (std::size_t i = 0; i < elig.size(); ++i) {
        if (!is_response(elig[i].category)) continue;
        if (!cfg.require_confirmation || confirmed(elig, i, cfg)) {
            r.onset_day = elig[i].day;
            break;
        }
    }
    r.is_responder = r.onset_day.has_value();
    if (r.is_responder) {
        // once a qualifying response exists, BOR is the best eligible category
        int best = 0;
        for (const auto& a : elig) best = std::max(best, category_rank(a.category));
        static const ResponseCategory by_rank[] = {
            ResponseCategory::NE, ResponseCategory::PD, ResponseCategory::SD,
            ResponseCategory::PR, ResponseCategory::CR};
        r.bor = by_rank[best];
    } else {
        // best non-response category; NE when nothing else was documented
        int best = 0;
        for (const auto& a : elig)
            if (!is_response(a.category)) best = std::max(best, category_rank(a.category));
        static const ResponseCategory by_rank[] = {
            ResponseCategory::NE, ResponseCategory::PD, ResponseCategory::SD,
            ResponseCategory::PR, ResponseCategory::CR};
        r.bor = by_rank[best];
    }
    return r;
}

OrrResult compute_orr(const std::vector<PatientRecord>& patients, const BorConfig& cfg) {
    OrrResult res;
    for (const auto& p : patients) {
        try {
            auto bor = derive_bor(p, cfg);
            ++res.n_total;
            if (bor.is_responder) ++res.n_responders;
        } catch (const NotEvaluable&) {
            ++res.n_not_evaluable;
        }
    }
    if (res.n_total == 0) throw EmptyPopulation("no evaluable patients for ORR");
    res.proportion = static_cast<double>(res.n_responders) / res.n_total;
    auto ci = stats::clopper_pearson(res.n_responders, res.n_total);
    res.ci_lower = ci.lower;
    res.ci_upper = ci.upper;
    return res;
}

}  // namespace respond
