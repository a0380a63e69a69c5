// Copyright 2026 The kacs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kacs/state_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"
#include "kacs/errors.hpp"

namespace kacs {

namespace {

constexpr char kMagic[8] = {'K', 'A', 'C', 'S', 'S', 'T', 'V', '1'};

static_assert(std::endian::native == std::endian::little, "state files assume a little-endian host");

void put_u32(std::ostream& out, uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); }
void put_f64(std::ostream& out, double v) { out.write(reinterpret_cast<const char*>(&v), 8); }

uint32_t get_u32(std::istream& in) {
  uint32_t v;
  if (!in.read(reinterpret_cast<char*>(&v), 4)) throw ParameterError("truncated state header");
  return v;
}

double get_f64(std::istream& in) {
  double v;
  if (!in.read(reinterpret_cast<char*>(&v), 8)) throw ParameterError("truncated state payload");
  return v;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

void write_state_binary(std::ostream& out, const StateVector& state, int d) {
  out.write(kMagic, sizeof kMagic);
  put_u32(out, state.is_real() ? 0 : 1);
  put_u32(out, static_cast<uint32_t>(exact_log2(state.dim())));
  put_u32(out, static_cast<uint32_t>(d));
  if (state.is_real()) {
    for (double a : state.real()) put_f64(out, a);
  } else {
    for (Complex a : state.complex()) {
      put_f64(out, a.real());
      put_f64(out, a.imag());
    }
  }
}

StateFile read_state_binary(std::istream& in) {
  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) {
    throw ParameterError("not a kacs state file");
  }
  const uint32_t field = get_u32(in);
  const uint32_t n = get_u32(in);
  const uint32_t d = get_u32(in);
  if (field > 1) throw ParameterError("unknown field code in state file");
  if (n > 30) throw DimensionError("state file declares too many qubits");
  const size_t dim = size_t{1} << n;
  if (field == 0) {
    std::vector<double> v(dim);
    for (auto& a : v) a = get_f64(in);
    return {StateVector::from_real(std::move(v)), static_cast<int>(d)};
  }
  std::vector<Complex> v(dim);
  for (auto& a : v) {
    const double re = get_f64(in);
    a = Complex(re, get_f64(in));
  }
  return {StateVector::from_complex(std::move(v)), static_cast<int>(d)};
}

std::string state_to_json(const StateVector& state, int d) {
  nlohmann::ordered_json j;
  j["field"] = std::string(to_string(state.field()));
  j["n"] = exact_log2(state.dim());
  j["d"] = d;
  auto amps = nlohmann::ordered_json::array();
  if (state.is_real()) {
    for (double a : state.real()) amps.push_back(a);
  } else {
    for (Complex a : state.complex()) amps.push_back({a.real(), a.imag()});
  }
  j["amplitudes"] = std::move(amps);
  return j.dump(1);
}

StateFile state_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  const Field field = parse_field(j.at("field").get<std::string>());
  const int n = j.at("n").get<int>();
  const int d = j.value("d", 0);
  const auto& amps = j.at("amplitudes");
  if (n < 0 || n > 30 || amps.size() != (size_t{1} << n)) {
    throw DimensionError("amplitude count does not match 2^n");
  }
  if (field == Field::Real) {
    std::vector<double> v;
    for (const auto& a : amps) v.push_back(a.get<double>());
    return {StateVector::from_real(std::move(v)), d};
  }
  std::vector<Complex> v;
  for (const auto& a : amps) v.emplace_back(a.at(0).get<double>(), a.at(1).get<double>());
  return {StateVector::from_complex(std::move(v)), d};
}

void save_state(const std::string& path, const StateVector& state, int d) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  if (ends_with(path, ".json")) {
    out << state_to_json(state, d) << '\n';
  } else {
    write_state_binary(out, state, d);
  }
}

StateFile load_state(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  if (ends_with(path, ".json")) {
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return state_from_json(text);
  }
  return read_state_binary(in);
}

}  // namespace kacs
