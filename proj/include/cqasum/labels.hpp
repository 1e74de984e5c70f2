#ifndef CQASUM_LABELS_HPP
#define CQASUM_LABELS_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "cqasum/error.hpp"

namespace cqasum {

// The five perspective categories, in canonical index order 0..4.
// This order is load-bearing: tie-breaks, matrix cell codes and report
// columns all use it.
enum class Perspective : int {
    Experience = 0,
    Information = 1,
    Cause = 2,
    Suggestion = 3,
    Question = 4,
};

inline constexpr int kNumPerspectives = 5;

// Vote code used inside weak supervision only. Never appears in pipeline
// outputs (predictions, spans, reports).
inline constexpr int kAbstain = -1;

inline constexpr std::array<Perspective, kNumPerspectives> kAllPerspectives = {
    Perspective::Experience, Perspective::Information, Perspective::Cause,
    Perspective::Suggestion, Perspective::Question};

inline const char* to_string(Perspective p) {
    switch (p) {
        case Perspective::Experience: return "EXPERIENCE";
        case Perspective::Information: return "INFORMATION";
        case Perspective::Cause: return "CAUSE";
        case Perspective::Suggestion: return "SUGGESTION";
        case Perspective::Question: return "QUESTION";
    }
    throw_internal("invalid perspective value");
}

inline std::optional<Perspective> perspective_from_string(std::string_view s) {
    for (Perspective p : kAllPerspectives) {
        if (s == to_string(p)) return p;
    }
    return std::nullopt;
}

inline Perspective perspective_from_index(int idx) {
    if (idx < 0 || idx >= kNumPerspectives) throw_internal("perspective index out of range");
    return static_cast<Perspective>(idx);
}

inline int index_of(Perspective p) { return static_cast<int>(p); }

// Where a predicted label came from in the cascade.
enum class Provenance : int { Rule = 0, Svm = 1, Zsl = 2 };

inline const char* to_string(Provenance p) {
    switch (p) {
        case Provenance::Rule: return "RULE";
        case Provenance::Svm: return "SVM";
        case Provenance::Zsl: return "ZSL";
    }
    throw_internal("invalid provenance value");
}

inline std::optional<Provenance> provenance_from_string(std::string_view s) {
    if (s == "RULE") return Provenance::Rule;
    if (s == "SVM") return Provenance::Svm;
    if (s == "ZSL") return Provenance::Zsl;
    return std::nullopt;
}

} // namespace cqasum

#endif // CQASUM_LABELS_HPP
