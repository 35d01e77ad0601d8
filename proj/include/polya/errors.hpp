#ifndef POLYA_ERRORS_HPP
#define POLYA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace polya {

// Argument outside the mathematical domain of a function (x <= 0 for
// log_gamma, negative Bessel argument, ...).
class domain_error : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

// The requested quantity does not exist because the defining integral or
// series diverges. Raised for dimensions 1 and 2, where the walk is recurrent.
class divergence_error : public domain_error
{
public:
    explicit divergence_error(int d)
        : domain_error("dimension " + std::to_string(d)
                       + " rejected: the Bessel integral and the lattice Green function "
                         "are not convergent for d=1,2 (the walk is recurrent, p(1)=p(2)=1)")
        , dimension_(d)
    {
    }

    int dimension() const noexcept { return dimension_; }

private:
    int dimension_;
};

// Malformed parameters that are not a pure domain issue (length mismatch,
// nonpositive-integer denominator parameter, ...).
class argument_error : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

class overflow_error : public std::overflow_error
{
public:
    using std::overflow_error::overflow_error;
};

// A request that would exceed a configured computational budget.
class resource_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

inline void require_transient_dimension(int d)
{
    if (d < 3)
        throw divergence_error(d);
}

} // namespace polya

#endif
