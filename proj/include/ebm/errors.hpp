#pragma once

#include <stdexcept>
#include <string>

namespace ebm {

//! Base class for numerical failures (CLI exit code 3).
class NumericalError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

class NonConvergence : public NumericalError
{
  public:
    using NumericalError::NumericalError;
};

class DegenerateRoot : public NumericalError
{
  public:
    using NumericalError::NumericalError;
};

class NoSolution : public NumericalError
{
  public:
    using NumericalError::NumericalError;
};

class StepFailure : public NumericalError
{
  public:
    using NumericalError::NumericalError;
};

//! Invalid or inconsistent configuration (CLI exit code 2).
class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace ebm
