#include "phasecov/serialization.hpp"

#include <cmath>
#include <memory>

#include "phasecov/error.hpp"

namespace phasecov {

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& why) {
    throw ValidationError(path + ": " + why);
}

const Json& field(const Json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) bad(path, "expected an object");
    const auto it = j.find(key);
    if (it == j.end()) bad(path + "." + key, "missing");
    return *it;
}

double number(const Json& j, const std::string& path) {
    if (!j.is_number()) bad(path, "expected a number");
    const double x = j.get<double>();
    if (!std::isfinite(x)) bad(path, "must be finite");
    return x;
}

std::vector<double> number_list(const Json& j, const std::string& path) {
    if (!j.is_array()) bad(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

FunctionTerm term_from_json(const Json& j, const std::string& path) {
    FunctionTerm term;
    const Json& kind = field(j, "kind", path);
    if (!kind.is_string()) bad(path + ".kind", "expected a string");
    try {
        term.kind = term_kind_from_string(kind.get<std::string>());
    } catch (const ValidationError& e) {
        bad(path + ".kind", e.what());
    }
    term.c = number(field(j, "c", path), path + ".c");
    switch (term.kind) {
    case TermKind::exp_decay: term.rate = number(field(j, "rate", path), path + ".rate"); break;
    case TermKind::cosine: term.rate = number(field(j, "omega", path), path + ".omega"); break;
    case TermKind::constant: break;
    }
    return term;
}

Json term_to_json(const FunctionTerm& term) {
    Json j{{"kind", std::string(to_string(term.kind))}, {"c", term.c}};
    if (term.kind == TermKind::exp_decay) j["rate"] = term.rate;
    if (term.kind == TermKind::cosine) j["omega"] = term.rate;
    return j;
}

} // namespace

Json to_json(const PhaseCovChannel& ch) {
    return {{"lambda", ch.lambda()}, {"lambda_z", ch.lambda_z()}, {"t_z", ch.t_z()}};
}

PhaseCovChannel channel_from_json(const Json& j, const std::string& path) {
    return {number(field(j, "lambda", path), path + ".lambda"),
            number(field(j, "lambda_z", path), path + ".lambda_z"), number(field(j, "t_z", path), path + ".t_z")};
}

Json to_json(const Verdict& v) { return {{"status", std::string(to_string(v.status))}, {"margin", v.margin}}; }

Json to_json(const ClassMembership& m) {
    return {{"class_l", to_json(m.in_c_l)},
            {"class_l_rotated", to_json(m.in_c_l_rotated)},
            {"class_phcov_cp", to_json(m.in_c_phcov_cp)},
            {"class_cp", to_json(m.in_c_cp)}};
}

Json to_json(const RationalLaplace& f) {
    return {{"num", f.numerator().coefficients()}, {"den", f.denominator().coefficients()}};
}

RationalLaplace rational_from_json(const Json& j, const std::string& path) {
    auto num = number_list(field(j, "num", path), path + ".num");
    auto den = number_list(field(j, "den", path), path + ".den");
    try {
        return {std::move(num), std::move(den)};
    } catch (const ValidationError& e) {
        bad(path, e.what());
    }
}

Json to_json(const NamedFunction& f) {
    if (f.terms().size() == 1) return term_to_json(f.terms().front());
    Json arr = Json::array();
    for (const auto& term : f.terms()) arr.push_back(term_to_json(term));
    return arr;
}

NamedFunction named_function_from_json(const Json& j, const std::string& path) {
    std::vector<FunctionTerm> terms;
    if (j.is_array()) {
        if (j.empty()) bad(path, "expected at least one term");
        for (std::size_t i = 0; i < j.size(); ++i) terms.push_back(term_from_json(j[i], path + "[" + std::to_string(i) + "]"));
    } else {
        terms.push_back(term_from_json(j, path));
    }
    return NamedFunction(std::move(terms));
}

Json to_json(const FamilySpec& spec) {
    Json params = Json::object();
    for (const auto& [k, v] : spec.params) params[k] = v;
    Json j{{"kind", std::string(to_string(spec.kind))}, {"params", params}};
    if (spec.f) j["f"] = to_json(*spec.f);
    return j;
}

FamilySpec family_spec_from_json(const Json& j, const std::string& path) {
    FamilySpec spec;
    const Json& kind = field(j, "kind", path);
    if (!kind.is_string()) bad(path + ".kind", "expected a string");
    try {
        spec.kind = family_kind_from_string(kind.get<std::string>());
    } catch (const ValidationError& e) {
        bad(path + ".kind", e.what());
    }
    if (j.contains("params")) {
        const Json& params = j.at("params");
        if (!params.is_object()) bad(path + ".params", "expected an object");
        for (const auto& [k, v] : params.items()) spec.params[k] = number(v, path + ".params." + k);
    }
    if (j.contains("f")) spec.f = named_function_from_json(j.at("f"), path + ".f");
    return spec;
}

TimeFunction time_function_from_json(const Json& j, const std::string& path) {
    if (j.is_number()) {
        const double c = number(j, path);
        return [c](double) { return c; };
    }
    if (j.is_object() && j.contains("samples")) {
        const Json& samples = j.at("samples");
        auto t = number_list(field(samples, "t", path + ".samples"), path + ".samples.t");
        auto v = number_list(field(samples, "value", path + ".samples"), path + ".samples.value");
        std::shared_ptr<const SampledFunction> fn;
        try {
            fn = std::make_shared<const SampledFunction>(std::move(t), std::move(v));
        } catch (const ValidationError& e) {
            bad(path + ".samples", e.what());
        }
        return [fn](double x) { return (*fn)(x); };
    }
    const NamedFunction f = named_function_from_json(j, path);
    return [f](double t) { return f(t); };
}

Json to_json(const KernelSpec& k) {
    return {{"kappa_plus", to_json(k.kappa_plus)}, {"kappa_minus", to_json(k.kappa_minus)},
            {"kappa_z", to_json(k.kappa_z)}};
}

KernelSpec kernel_spec_from_json(const Json& j, const std::string& path) {
    return {rational_from_json(field(j, "kappa_plus", path), path + ".kappa_plus"),
            rational_from_json(field(j, "kappa_minus", path), path + ".kappa_minus"),
            rational_from_json(field(j, "kappa_z", path), path + ".kappa_z")};
}

Json to_json(const PropertyTimeline& timeline, bool include_verdicts) {
    Json intervals = Json::array();
    for (const auto& i : timeline.intervals) {
        intervals.push_back({{"start", i.start}, {"end", i.end}, {"status", std::string(to_string(i.status))}});
    }
    Json crossings = Json::array();
    for (const auto& c : timeline.crossings) {
        crossings.push_back({{"t", c.t}, {"from", std::string(to_string(c.from))}, {"to", std::string(to_string(c.to))}});
    }
    Json j{{"intervals", intervals}, {"crossings", crossings}};
    if (include_verdicts) {
        Json verdicts = Json::array();
        for (const auto& v : timeline.verdicts) verdicts.push_back(to_json(v));
        j["verdicts"] = verdicts;
    }
    return j;
}

Json to_json(const DivisibilityReport& report, bool include_verdicts) {
    Json j{{"t_min", report.grid.front()},
           {"t_max", report.grid.back()},
           {"n_grid", report.grid.size()},
           {"crossing_resolution", kCrossingResolution},
           {"cp_divisible", to_json(report.cp_divisible, include_verdicts)},
           {"p_divisible", to_json(report.p_divisible, include_verdicts)},
           {"blp_monotone", to_json(report.blp_monotone, include_verdicts)},
           {"chain_violations", report.chain_violations}};
    if (include_verdicts) j["grid"] = report.grid;
    return j;
}

Json to_json(const CMReport& report) {
    Json j{{"function", report.function_id},
           {"depth_checked", report.depth_checked},
           {"grid", {{"n", report.grid.size()}, {"min", report.grid.front()}, {"max", report.grid.back()}}},
           {"verdict", std::string(to_string(report.status))},
           {"min_normalized", report.min_normalized}};
    if (report.witness) {
        j["witness"] = {{"s", report.witness->s}, {"n", report.witness->n}, {"value", report.witness->value}};
    } else {
        j["witness"] = nullptr;
    }
    return j;
}

Json to_json(const AdmissibilityReport& report) {
    Json functions = Json::array();
    for (const auto& r : report.per_function) functions.push_back(to_json(r));
    return {{"overall", to_json(report.overall)}, {"functions", functions}};
}

} // namespace phasecov
