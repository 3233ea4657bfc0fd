#include <cmath>
#include <stdexcept>
#include <string>

#include "uwbsd/types.hpp"

namespace uwbsd {

namespace {

std::int8_t checked_symbol(int value) {
  if (value != 1 && value != -1) {
    throw std::invalid_argument("hypothesis symbol must be +1 or -1, got " +
                                std::to_string(value));
  }
  return static_cast<std::int8_t>(value);
}

}  // namespace

Hypothesis::Hypothesis(std::size_t block_size, int value)
    : symbols_(block_size, checked_symbol(value)) {}

Hypothesis::Hypothesis(std::initializer_list<int> symbols) {
  symbols_.reserve(symbols.size());
  for (int s : symbols) symbols_.push_back(checked_symbol(s));
}

Hypothesis::Hypothesis(std::span<const int> symbols) {
  symbols_.reserve(symbols.size());
  for (int s : symbols) symbols_.push_back(checked_symbol(s));
}

int Hypothesis::at(std::size_t i) const {
  if (i == 0 || i > symbols_.size()) throw std::out_of_range("hypothesis index out of range");
  return symbols_[i - 1];
}

void Hypothesis::set(std::size_t i, int value) {
  if (i == 0 || i > symbols_.size()) throw std::out_of_range("hypothesis index out of range");
  symbols_[i - 1] = checked_symbol(value);
}

void Hypothesis::flip(std::size_t i) {
  if (i == 0 || i > symbols_.size()) throw std::out_of_range("hypothesis index out of range");
  symbols_[i - 1] = static_cast<std::int8_t>(-symbols_[i - 1]);
}

AcrMatrix::AcrMatrix(std::size_t block_size, double sigma_n2)
    : block_size_(block_size), values_(entry_count(block_size), 0.0) {
  if (block_size == 0) throw std::invalid_argument("AcrMatrix: block size must be >= 1");
  set_sigma_n2(sigma_n2);
}

void AcrMatrix::set_sigma_n2(double sigma_n2) {
  // Zero is admitted for noiseless front-end output; detectors that scale by
  // σ_n² reject it themselves.
  if (!std::isfinite(sigma_n2) || sigma_n2 < 0.0) {
    throw std::invalid_argument("AcrMatrix: sigma_n2 must be finite and >= 0");
  }
  sigma_n2_ = sigma_n2;
}

void AcrMatrix::check_index(std::size_t l, std::size_t i) const {
  if (i == 0 || i > block_size_ || l >= i) {
    throw std::out_of_range("AcrMatrix: Z(" + std::to_string(l) + "," + std::to_string(i) +
                            ") outside 0 <= l < i <= " + std::to_string(block_size_));
  }
}

double AcrMatrix::operator()(std::size_t l, std::size_t i) const {
  check_index(l, i);
  return values_[offset(i) + l];
}

void AcrMatrix::set(std::size_t l, std::size_t i, double value) {
  check_index(l, i);
  if (!std::isfinite(value)) throw std::invalid_argument("AcrMatrix: entries must be finite");
  values_[offset(i) + l] = value;
}

std::span<const double> AcrMatrix::column(std::size_t i) const {
  if (i == 0 || i > block_size_) throw std::out_of_range("AcrMatrix: column out of range");
  return std::span<const double>(values_).subspan(offset(i), i);
}

void DetectorConfig::validate() const {
  if (block_size == 0) throw std::invalid_argument("DetectorConfig: block_size must be >= 1");
  if (!(llr_max >= 0.0)) throw std::invalid_argument("DetectorConfig: llr_max must be >= 0");
}

}  // namespace uwbsd
