#pragma once

#include <stdexcept>
#include <string>

namespace ordnung {

// Failure codes surfaced by the library. CLI maps any of these to exit 1.
enum class errc {
    not_strictly_ordered,
    size_mismatch,
    index_out_of_range,
    negative_radius,
    bad_thresholds,
    bad_indices,
    bad_size,
    empty_family,
    tolerance_non_positive,
    invalid_witness,
    not_monotone,
    not_bv_r,
    not_increasing,
    target_mismatch,
    budget_exhausted,
    ground_too_large,
    grid_too_coarse,
    too_large,
    not_separating,
    parse_error,
    schema_error,
    precondition,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::not_strictly_ordered: return "NotStrictlyOrdered";
        case errc::size_mismatch: return "SizeMismatch";
        case errc::index_out_of_range: return "IndexOutOfRange";
        case errc::negative_radius: return "NegativeRadius";
        case errc::bad_thresholds: return "BadThresholds";
        case errc::bad_indices: return "BadIndices";
        case errc::bad_size: return "BadSize";
        case errc::empty_family: return "EmptyFamily";
        case errc::tolerance_non_positive: return "ToleranceNonPositive";
        case errc::invalid_witness: return "InvalidWitness";
        case errc::not_monotone: return "NotMonotone";
        case errc::not_bv_r: return "NotBVr";
        case errc::not_increasing: return "NotIncreasing";
        case errc::target_mismatch: return "TargetMismatch";
        case errc::budget_exhausted: return "BudgetExhausted";
        case errc::ground_too_large: return "GroundTooLarge";
        case errc::grid_too_coarse: return "GridTooCoarse";
        case errc::too_large: return "TooLarge";
        case errc::not_separating: return "NotSeparating";
        case errc::parse_error: return "ParseError";
        case errc::schema_error: return "SchemaError";
        case errc::precondition: return "PreconditionViolated";
    }
    return "UnknownError";
}

class error : public std::runtime_error {
public:
    error(errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
    throw error(code, message);
}

inline void require(bool cond, errc code, const std::string& message) {
    if (!cond) fail(code, message);
}

} // namespace ordnung
