#ifndef CHUR_ERRORS_HPP
#define CHUR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace chur {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A translation would wrap around the periodic grid.
class ShiftTooLarge : public Error {
public:
  using Error::Error;
};

/// The requested state does not fit on the grid.
class GridTooSmall : public Error {
public:
  using Error::Error;
};

/// Comb teeth narrower than two grid steps.
class TeethUnresolved : public Error {
public:
  using Error::Error;
};

class ZeroVariance : public Error {
public:
  using Error::Error;
};

/// A detection location moves the mask outside the representable window.
class DomainOverflow : public Error {
public:
  using Error::Error;
};

class NonIntegrableMask : public Error {
public:
  using Error::Error;
};

class InvalidShots : public Error {
public:
  using Error::Error;
};

class NotUnitary : public Error {
public:
  using Error::Error;
};

class NotUnitVector : public Error {
public:
  using Error::Error;
};

/// Malformed argument that is not covered by a more specific error.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

} // namespace chur

#endif // CHUR_ERRORS_HPP
