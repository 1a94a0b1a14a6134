#ifndef CMC_ERRORS_HPP
#define CMC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cmc {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A Cholesky pivot was <= 0: the matrix is not positive definite.
/// In model fitting this signals a collinear design or degenerate weights.
class NotPositiveDefinite : public Error {
public:
    explicit NotPositiveDefinite(const std::string& what) : Error(what) {}
};

/// The selected design columns (plus intercept) are collinear.
class Collinear : public Error {
public:
    explicit Collinear(const std::string& what) : Error(what) {}
};

/// A likelihood evaluation hit an invalid boundary (zero residual variance,
/// a degenerate fitted mean, or a non-finite contribution).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(what) {}
};

/// loglik_ratio was given a reference fit that is not the full model.
class InvalidComparison : public Error {
public:
    explicit InvalidComparison(const std::string& what) : Error(what) {}
};

/// Exhaustive enumeration refuses to run beyond the p <= 20 guard.
class TooManyPredictors : public Error {
public:
    explicit TooManyPredictors(const std::string& what) : Error(what) {}
};

/// FIR/FAR are undefined when a scenario has no active or no inactive variables.
class DegenerateDenominator : public Error {
public:
    explicit DegenerateDenominator(const std::string& what) : Error(what) {}
};

/// CSV ingestion errors.
class MissingColumn : public Error {
public:
    explicit MissingColumn(const std::string& what) : Error(what) {}
};

class NonNumericCell : public Error {
public:
    explicit NonNumericCell(const std::string& what) : Error(what) {}
};

class UnmappedLevel : public Error {
public:
    explicit UnmappedLevel(const std::string& what) : Error(what) {}
};

/// Scenario stanza files.
class ScenarioParseError : public Error {
public:
    explicit ScenarioParseError(const std::string& what) : Error(what) {}
};

} // namespace cmc

#endif // CMC_ERRORS_HPP
