#include "poems/noise_psd.hpp"

#include <cmath>
#include <string>

#include "poems/errors.hpp"

namespace poems {

std::string_view domain_unit(PsdDomain d) {
    switch (d) {
        case PsdDomain::voltage: return "V^2/Hz";
        case PsdDomain::displacement: return "m^2/Hz";
        case PsdDomain::phase: return "rad^2/Hz";
        case PsdDomain::current: return "A^2/Hz";
    }
    return "?";
}

NoisePsd::NoisePsd(double value, PsdDomain domain) : value_(value), domain_(domain) {
    if (!(value >= 0.0) || std::isinf(value))
        throw NumericError("PSD value must be finite and nonnegative, got " + std::to_string(value));
}

const NoisePsd& NoisePsd::require(PsdDomain expected) const {
    if (domain_ != expected)
        throw DomainMismatch("expected a PSD in " + std::string(domain_unit(expected)) + ", got " +
                             std::string(domain_unit(domain_)));
    return *this;
}

NoisePsd NoisePsd::operator+(const NoisePsd& other) const {
    other.require(domain_);
    return {value_ + other.value_, domain_};
}

NoisePsd& NoisePsd::operator+=(const NoisePsd& other) {
    *this = *this + other;
    return *this;
}

NoisePsd NoisePsd::operator*(double scale) const { return {value_ * scale, domain_}; }

}  // namespace poems
