#pragma once

#include <stdexcept>

namespace singfde {

/// Nonnegative extended real used for norms and improper integrals.
///
/// Divergent quantities are carried as an explicit tag instead of a
/// floating-point infinity, so arithmetic never silently propagates inf.
class ExtendedReal {
public:
    ExtendedReal() = default;

    static ExtendedReal finite(double v) { return ExtendedReal(v, true); }
    static ExtendedReal infinity() { return ExtendedReal(0.0, false); }

    bool is_finite() const { return finite_; }

    /// Finite value; throws if the quantity diverged.
    double value() const
    {
        if (!finite_)
            throw std::logic_error("ExtendedReal: value() on divergent quantity");
        return value_;
    }

    double value_or(double fallback) const { return finite_ ? value_ : fallback; }

private:
    ExtendedReal(double v, bool finite) : value_(v), finite_(finite) {}

    double value_ = 0.0;
    bool finite_ = true;
};

} // namespace singfde
