#pragma once

#include <stdexcept>
#include <string>

namespace fts {

class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

//! Parameter outside the domain of an operation (CLI exit code 2).
class InvalidArgument : public Error
{
public:
  using Error::Error;
};

//! Malformed or inconsistent input data (CLI exit code 3).
class InputError : public Error
{
public:
  using Error::Error;
};

class ShapeMismatch : public InputError
{
public:
  using InputError::InputError;
};

class InputTooShort : public InputError
{
public:
  using InputError::InputError;
};

//! A numerical procedure could not produce a result (CLI exit code 4).
class NumericError : public Error
{
public:
  using Error::Error;
};

class SingularFit : public NumericError
{
public:
  SingularFit(double t, double bandwidth);
  double t() const { return t_; }
  double bandwidth() const { return bandwidth_; }

private:
  double t_;
  double bandwidth_;
};

class BandwidthTooSmall : public NumericError
{
public:
  using NumericError::NumericError;
};

class EmptyWindow : public NumericError
{
public:
  EmptyWindow(double t, double bandwidth);
  double t() const { return t_; }

private:
  double t_;
};

class NonEquidistant : public NumericError
{
public:
  using NumericError::NumericError;
};

class AllBandwidthsInvalid : public NumericError
{
public:
  using NumericError::NumericError;
};

} // namespace fts
