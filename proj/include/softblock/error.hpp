#pragma once

#include <stdexcept>
#include <string>

namespace softblock {

// Base class for every recoverable error raised by the library.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define SOFTBLOCK_DEFINE_ERROR(NAME)                \
  struct NAME : Error {                             \
    explicit NAME(const std::string& msg)           \
        : Error(std::string(#NAME) + ": " + msg) {} \
  };

// dataset
SOFTBLOCK_DEFINE_ERROR(MissingFile)
SOFTBLOCK_DEFINE_ERROR(RaggedRows)
SOFTBLOCK_DEFINE_ERROR(NonNumericField)
SOFTBLOCK_DEFINE_ERROR(InvalidData)

// graph
SOFTBLOCK_DEFINE_ERROR(NonPositiveBandwidth)
SOFTBLOCK_DEFINE_ERROR(DisconnectedGraph)
SOFTBLOCK_DEFINE_ERROR(LengthMismatch)

// designs
SOFTBLOCK_DEFINE_ERROR(CycleDetected)
SOFTBLOCK_DEFINE_ERROR(MaxDrawsExceeded)

// balance / estimators
SOFTBLOCK_DEFINE_ERROR(EmptyArm)
SOFTBLOCK_DEFINE_ERROR(RankDeficient)
SOFTBLOCK_DEFINE_ERROR(IsolatedUnit)
SOFTBLOCK_DEFINE_ERROR(ArmTooSmall)
SOFTBLOCK_DEFINE_ERROR(WrongDesignKind)
SOFTBLOCK_DEFINE_ERROR(ZeroDegreeNode)

// dpp
SOFTBLOCK_DEFINE_ERROR(EdgeNotInGraph)
SOFTBLOCK_DEFINE_ERROR(TooLarge)

// simulate
SOFTBLOCK_DEFINE_ERROR(UnknownDgp)

#undef SOFTBLOCK_DEFINE_ERROR

}  // namespace softblock
