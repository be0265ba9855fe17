#pragma once

#include "classify.hpp"

#include <json.hpp>

#include <ostream>

namespace cexclass {

inline nlohmann::json state_to_json(const State& s) {
    nlohmann::json j = nlohmann::json::object();
    for (std::size_t i = 0; i < s.values.size(); ++i)
        j[s.layout->var(i).name] = s.layout->var(i).domain.render(s.values[i]);
    return j;
}

inline nlohmann::json trace_to_json(const Trace& t) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& s : t.states) arr.push_back(state_to_json(s));
    return arr;
}

/// Everything one CLI run reports; serializable as text or JSON carrying
/// the same fields.
struct Report {
    std::string command;
    nlohmann::json config = nlohmann::json::object();

    std::string status; // ok | violated | error
    std::optional<Classification> classification;
    std::optional<ClassifyError> error;
    std::optional<Trace> witness;                 // check
    std::optional<std::uint64_t> count;           // count / enumerate
    std::vector<Trace> traces;                    // enumerate
    std::vector<bool> trace_violates;             // enumerate
    std::optional<std::uint64_t> counterexamples; // classify summary
    double verify_ms = 0;
    double other_ms = 0;

    const VarLayout* layout = nullptr;

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["schema"] = "cexclass-report/1";
        j["command"] = command;
        j["config"] = config;
        j["status"] = status;
        if (classification) {
            nlohmann::json classes = nlohmann::json::array();
            for (const auto& c : classification->classes) {
                nlohmann::json jc;
                jc["constraint"] = render(c.constraint, *layout);
                jc["position_vars"] = c.constraint.position_vars;
                jc["seeded"] = c.seeded;
                jc["representative"] = trace_to_json(c.representative);
                jc["canonical_witness"] = c.canonical_witness ? trace_to_json(*c.canonical_witness) : nlohmann::json();
                classes.push_back(std::move(jc));
            }
            j["classes"] = std::move(classes);
            j["summary"] = {{"class_count", classification->classes.size()},
                            {"counterexample_count", counterexamples ? nlohmann::json(*counterexamples) : nlohmann::json()},
                            {"iterations", classification->iterations},
                            {"verifier_ms", verify_ms},
                            {"other_ms", other_ms}};
        }
        if (error) {
            const char* kind = error->kind == ClassifyError::Kind::insufficient_facts ? "insufficient-facts"
                               : error->kind == ClassifyError::Kind::insufficient_predicates
                                   ? "insufficient-predicates"
                                   : "no-accepting-trace";
            j["error"] = {{"kind", kind},
                          {"message", error->message},
                          {"capped", error->capped},
                          {"offending_trace", error->offending ? trace_to_json(*error->offending) : nlohmann::json()}};
        }
        if (witness) j["witness"] = trace_to_json(*witness);
        if (count) j["count"] = *count;
        if (!traces.empty() || command == "enumerate") {
            nlohmann::json arr = nlohmann::json::array();
            for (std::size_t i = 0; i < traces.size(); ++i)
                arr.push_back({{"states", trace_to_json(traces[i])}, {"violates", static_cast<bool>(trace_violates[i])}});
            j["traces"] = std::move(arr);
        }
        return j;
    }

    void write_text(std::ostream& os) const {
        os << "command: " << command << "\n";
        for (auto it = config.begin(); it != config.end(); ++it)
            os << it.key() << ": " << (it.value().is_string() ? it.value().get<std::string>() : it.value().dump())
               << "\n";
        os << "status: " << status << "\n";
        if (classification) {
            os << "classes: " << classification->classes.size() << "\n";
            for (std::size_t i = 0; i < classification->classes.size(); ++i) {
                const auto& c = classification->classes[i];
                os << "class " << (i + 1) << ":\n";
                os << "  constraint: " << render(c.constraint, *layout) << "\n";
                os << "  position_vars: " << c.constraint.position_vars << "\n";
                os << "  seeded: " << (c.seeded ? "yes" : "no") << "\n";
                os << "  representative: " << c.representative.render() << "\n";
                os << "  canonical_witness: " << (c.canonical_witness ? c.canonical_witness->render() : "none") << "\n";
            }
            os << "summary: class_count=" << classification->classes.size();
            os << " counterexample_count=" << (counterexamples ? std::to_string(*counterexamples) : "n/a");
            os << " iterations=" << classification->iterations;
            os << " verifier_ms=" << verify_ms << " other_ms=" << other_ms << "\n";
        }
        if (error) {
            os << "error: " << error->message << "\n";
            if (error->offending) os << "offending_trace: " << error->offending->render() << "\n";
        }
        if (witness) os << "witness: " << witness->render() << "\n";
        if (count) os << "count: " << *count << "\n";
        if (!traces.empty()) {
            for (std::size_t i = 0; i < traces.size(); ++i)
                os << "trace " << (i + 1) << (trace_violates[i] ? " [violates]: " : " [ok]: ") << traces[i].render()
                   << "\n";
        }
    }
};

} // namespace cexclass
