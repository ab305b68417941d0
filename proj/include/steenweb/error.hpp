#ifndef STEENWEB_ERROR_HPP
#define STEENWEB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace steenweb {

enum class Errc {
    invalid_argument,     // parameter outside its documented domain
    parse_error,          // element grammar / file schema
    precondition,         // operation precondition not met by the input
    hypothesis_violation, // lemma or theorem hypotheses do not hold
    base_case,            // leading_coefficient_check on the trivial decomposition
    slice_too_large,      // enumeration refused
    not_periodic,         // classify_4periodic on a non 4-periodic ring
    infeasible,           // random model parameters cannot be satisfied
    invariant_breach,     // internal consistency check failed
};

inline const char* to_string(Errc e)
{
    switch (e) {
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::parse_error: return "parse-error";
    case Errc::precondition: return "precondition";
    case Errc::hypothesis_violation: return "hypothesis-violation";
    case Errc::base_case: return "base-case";
    case Errc::slice_too_large: return "slice-too-large";
    case Errc::not_periodic: return "not-4-periodic";
    case Errc::infeasible: return "infeasible-parameters";
    case Errc::invariant_breach: return "internal-invariant-breach";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

class ParseError : public Error {
public:
    ParseError(std::size_t position, const std::string& what)
        : Error(Errc::parse_error, what + " at position " + std::to_string(position)), position_(position)
    {
    }
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/* Throws invariant_breach; used for checks that must hold by construction. */
inline void ensure(bool condition, const char* what)
{
    if (!condition)
        throw Error(Errc::invariant_breach, what);
}

} // namespace steenweb

#endif // STEENWEB_ERROR_HPP
