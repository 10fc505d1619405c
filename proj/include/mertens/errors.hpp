#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace mertens {

// Invalid argument against a stated precondition (the message names the
// violated inequality).
struct invalid_parameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Evaluation requested at (or numerically indistinguishable from) a pole.
struct pole_error : std::domain_error {
    explicit pole_error(const std::string& what, std::complex<double> where = {})
        : std::domain_error(what), location(where) {}
    std::complex<double> location;
};

// Evaluation requested inside the exclusion radius around a pole; carries
// the nearest pole so callers can report or step away from it.
struct pole_proximity_error : std::domain_error {
    pole_proximity_error(const std::string& what, std::complex<double> pole, double dist)
        : std::domain_error(what), nearest_pole(pole), distance(dist) {}
    std::complex<double> nearest_pole;
    double distance;
};

// A truncated series hit its term cap before the tail bound met tolerance.
struct truncation_failure : std::runtime_error {
    truncation_failure(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_bound(achieved) {}
    double achieved_bound;
};

// The remainder bound of an evaluation exceeds the requested target.
struct accuracy_error : std::runtime_error {
    accuracy_error(const std::string& what, double achieved, double target)
        : std::runtime_error(what), achieved(achieved), target(target) {}
    double achieved;
    double target;
};

// Zero search could not reconcile the sign-change count with the counting
// formula; carries the most suspicious gap.
struct incompleteness_error : std::runtime_error {
    incompleteness_error(const std::string& what, double lo, double hi)
        : std::runtime_error(what), gap_lo(lo), gap_hi(hi) {}
    double gap_lo;
    double gap_hi;
};

// |zeta'(rho)| fell below the simplicity floor; refusing to emit a residue.
struct near_multiple_zero_error : std::runtime_error {
    near_multiple_zero_error(const std::string& what, double gamma, double zp)
        : std::runtime_error(what), gamma(gamma), zeta_prime_abs(zp) {}
    double gamma;
    double zeta_prime_abs;
};

// A stated hypothesis (e.g. the 1/|zeta| line bound) failed at the
// requested parameters.
struct hypothesis_violation : std::runtime_error {
    hypothesis_violation(const std::string& what, double value, double limit)
        : std::runtime_error(what), value(value), limit(limit) {}
    double value;
    double limit;
};

// Scan along a vertical segment could not exclude a zero of zeta on it.
struct potential_zero_on_line : std::runtime_error {
    potential_zero_on_line(const std::string& what, double sigma)
        : std::runtime_error(what), sigma(sigma) {}
    double sigma;
};

// Requested sieve segment exceeds the memory budget; caller should reduce.
struct segmentation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A table or oracle does not cover the requested range.
struct oracle_range_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Text-format parse failure with the offending line number.
struct parse_error : std::runtime_error {
    parse_error(const std::string& what, long line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_no(line) {}
    long line_no;
};

}  // namespace mertens
