// SPDX-License-Identifier: Apache-2.0
//
// Error taxonomy shared by all udn modules.  Every failure mode that callers
// are expected to branch on gets its own exception type; anything else is a
// plain udn::Error.

#pragma once

#include <stdexcept>
#include <string>

namespace udn {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid constructor/operation argument (non-positive scale, bad grammar, ...).
class BadParameter : public Error {
public:
    using Error::Error;
};

/// Ascending and descending pole sets admit no separating contour.
class PoleCollision : public Error {
public:
    using Error::Error;
};

/// The requested value does not exist (integral/series diverges at this argument).
class Divergent : public Error {
public:
    using Error::Error;
};

/// Evaluation budget exhausted before the residual target was met, or the
/// accumulation was too ill-conditioned to trust.
class NoConvergence : public Error {
public:
    using Error::Error;
};

/// Mellin moment requested outside the kernel's fundamental strip.
class StripViolation : public Error {
public:
    using Error::Error;
};

/// Asymptotic form not defined for this kernel class / regime.
class NotApplicable : public Error {
public:
    using Error::Error;
};

/// A series/mixture expansion would need more terms than the configured cap.
class TruncationOverflow : public Error {
public:
    using Error::Error;
};

/// An inner quadrature failed to reach its tolerance.
class QuadratureFailure : public Error {
public:
    using Error::Error;
};

/// The analytic engine does not support the requested association rule.
class InvalidAssociation : public Error {
public:
    using Error::Error;
};

/// Path-loss exponent outside (2, inf), i.e. delta = 2/alpha outside (0, 1).
class DeltaOutOfRange : public Error {
public:
    using Error::Error;
};

/// A formula input sits exactly on a removable singularity it cannot handle.
class ParameterSingularity : public Error {
public:
    using Error::Error;
};

/// Simulator asked to compute SINR on a realization with no transmitters.
class EmptyRealization : public Error {
public:
    using Error::Error;
};

/// Malformed sweep/figure configuration file; message carries line context.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace udn
