#pragma once

#include <string_view>

namespace poems {

enum class PsdDomain { voltage, displacement, phase, current };

std::string_view domain_unit(PsdDomain d);

// One-sided power spectral density tagged with its physical domain.
// Arithmetic across domains throws DomainMismatch.
class NoisePsd {
public:
    NoisePsd(double value, PsdDomain domain);

    static NoisePsd voltage(double v) { return {v, PsdDomain::voltage}; }
    static NoisePsd displacement(double v) { return {v, PsdDomain::displacement}; }
    static NoisePsd phase(double v) { return {v, PsdDomain::phase}; }
    static NoisePsd current(double v) { return {v, PsdDomain::current}; }

    double value() const noexcept { return value_; }
    PsdDomain domain() const noexcept { return domain_; }

    // Throws DomainMismatch unless domain() == expected.
    const NoisePsd& require(PsdDomain expected) const;

    NoisePsd operator+(const NoisePsd& other) const;
    NoisePsd& operator+=(const NoisePsd& other);
    NoisePsd operator*(double scale) const;

    bool operator==(const NoisePsd&) const = default;

private:
    double value_;
    PsdDomain domain_;
};

inline NoisePsd operator*(double scale, const NoisePsd& p) { return p * scale; }

}  // namespace poems
