#pragma once

#include <stdexcept>

namespace mptcplab {

/// Base type for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define MPTCPLAB_DEFINE_ERROR(NAME) \
  class NAME : public Error {       \
   public:                          \
    using Error::Error;             \
  }

MPTCPLAB_DEFINE_ERROR(InvalidSpec);
MPTCPLAB_DEFINE_ERROR(UnknownLink);
MPTCPLAB_DEFINE_ERROR(UnknownPreset);
MPTCPLAB_DEFINE_ERROR(DomainError);
MPTCPLAB_DEFINE_ERROR(Infeasible);
MPTCPLAB_DEFINE_ERROR(InfeasibleFloor);
MPTCPLAB_DEFINE_ERROR(NoConvergence);
MPTCPLAB_DEFINE_ERROR(TooLarge);
MPTCPLAB_DEFINE_ERROR(DimensionMismatch);
MPTCPLAB_DEFINE_ERROR(AllocationMismatch);
MPTCPLAB_DEFINE_ERROR(EmptyTrajectory);
MPTCPLAB_DEFINE_ERROR(InvalidStep);
MPTCPLAB_DEFINE_ERROR(NumericalBlowup);
MPTCPLAB_DEFINE_ERROR(ConfigError);
MPTCPLAB_DEFINE_ERROR(IoError);

#undef MPTCPLAB_DEFINE_ERROR

}  // namespace mptcplab
