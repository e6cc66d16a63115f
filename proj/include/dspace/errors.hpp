#pragma once
#include <stdexcept>
#include <string>

namespace dspace {

/* Error taxonomy. Each operation documents which of these it can raise. */

struct Error : std::runtime_error {
    explicit Error(const std::string& m) : std::runtime_error(m) {}
};

/* Homology requested past the stored simplex dimensions. */
struct InsufficientDimension : Error {
    explicit InsufficientDimension(const std::string& m) : Error("InsufficientDimension: " + m) {}
};

/* Two-sided bar data whose modules live over different categories. */
struct MismatchedBase : Error {
    explicit MismatchedBase(const std::string& m) : Error("MismatchedBase: " + m) {}
};

/* Diagram data that fails functoriality. */
struct NotAFunctor : Error {
    explicit NotAFunctor(const std::string& m) : Error("NotAFunctor: " + m) {}
};

/* A simplicial or homotopy identity failed; carries the witness location. */
struct IdentityViolation : Error {
    int q, i, j;
    IdentityViolation(int q_, int i_, int j_, const std::string& m)
        : Error("IdentityViolation(q=" + std::to_string(q_) + ",i=" + std::to_string(i_) +
                ",j=" + std::to_string(j_) + "): " + m),
          q(q_), i(i_), j(j_) {}
};

/* Object outside the truncation range. */
struct ObjectOutOfRange : Error {
    explicit ObjectOutOfRange(const std::string& m) : Error("ObjectOutOfRange: " + m) {}
};

/* An algebraic law (associativity, unit, naturality, ...) failed. */
struct LawViolation : Error {
    explicit LawViolation(const std::string& m) : Error("LawViolation: " + m) {}
};

/* Truncation parameter too small for the requested computation. */
struct TruncationTooSmall : Error {
    explicit TruncationTooSmall(const std::string& m) : Error("TruncationTooSmall: " + m) {}
};

/* A colimit or stabilization did not settle within the range. */
struct NotStabilized : Error {
    int k;
    explicit NotStabilized(int k_, const std::string& m)
        : Error("NotStabilized(k=" + std::to_string(k_) + "): " + m), k(k_) {}
};

/* Operation requires chain-model-backed spectrum levels. */
struct NotDkBacked : Error {
    explicit NotDkBacked(const std::string& m) : Error("NotDkBacked: " + m) {}
};

/* An asserted bijection failed. */
struct BijectionFailure : Error {
    explicit BijectionFailure(const std::string& m) : Error("BijectionFailure: " + m) {}
};

/* Commutativity required but absent. */
struct NotCommutative : Error {
    explicit NotCommutative(const std::string& m) : Error("NotCommutative: " + m) {}
};

/* Gamma-space range too small for the requested construction. */
struct InsufficientGammaRange : Error {
    explicit InsufficientGammaRange(const std::string& m) : Error("InsufficientGammaRange: " + m) {}
};

/* Internal guard: computation would exceed the configured size budget. */
struct SizeBudgetExceeded : Error {
    explicit SizeBudgetExceeded(const std::string& m) : Error("SizeBudgetExceeded: " + m) {}
};

/* Arithmetic overflow guard in exact integer routines. */
struct OverflowError : Error {
    explicit OverflowError(const std::string& m) : Error("OverflowError: " + m) {}
};

} // namespace dspace
