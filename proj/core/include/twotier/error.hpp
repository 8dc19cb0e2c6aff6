#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace twotier {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A parameter block (quadrature, fit grid, layout, ...) violates its invariants.
class InvalidConfiguration : public Error {
 public:
  using Error::Error;
};

// Quadrature window leaves more than the allowed tail mass outside.
class WindowTooSmall : public Error {
 public:
  using Error::Error;
};

// Grid-search optimum landed on the edge of the search range.
class BoundaryHit : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Correlation requested between ratio terms that do not share a denominator.
class UnsupportedPair : public Error {
 public:
  using Error::Error;
};

// Fenton-Wilkinson produced a non-positive ln-domain variance.
class DegenerateCombination : public Error {
 public:
  using Error::Error;
};

// Moment accumulation overflowed; carries the index of the offending term.
class RangeError : public Error {
 public:
  RangeError(const std::string& what, std::size_t term_index)
      : Error(what), term_index_(term_index) {}
  std::size_t term_index() const noexcept { return term_index_; }

 private:
  std::size_t term_index_;
};

// A receiver is collocated with a transmitter, or lies outside the macrocell.
class GeometryError : public Error {
 public:
  using Error::Error;
};

// Femtocell intensity gives a per-subregion occupancy probability >= 1.
class IntensityTooHigh : public Error {
 public:
  using Error::Error;
};

// QoS targets are already violated without any femtocells.
class InfeasibleQos : public Error {
 public:
  using Error::Error;
};

}  // namespace twotier
