#include <array>
#include <optional>
#include <charconv>
#include <cstdio>
#include <sstream>
#include <string_view>

#include "exchlab/errors.hpp"
#include "exchlab/fock/state.hpp"

namespace exchlab::fock {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

int parse_int(std::string_view s, std::string_view what) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParseError("bad " + std::string(what) + ": '" + std::string(s) + "'");
  }
  return v;
}

double parse_double(std::string_view s) {
  std::string tmp(s);
  char* end = nullptr;
  const double v = std::strtod(tmp.c_str(), &end);
  if (tmp.empty() || end != tmp.c_str() + tmp.size()) throw ParseError("bad number: '" + tmp + "'");
  return v;
}

ModeLabel parse_mode(std::string_view s) {
  const auto parts = split(s, ',');
  if (parts.size() != 3) throw ParseError("mode needs site,spin,vib: '" + std::string(s) + "'");
  ModeLabel m;
  const auto coords = split(parts[0], ';');
  if (coords.size() > 2) throw ParseError("site has too many coordinates");
  m.site.x = parse_int(coords[0], "site");
  if (coords.size() == 2) m.site.y = parse_int(coords[1], "site");
  if (parts[1] == "up") {
    m.spin = Spin::up;
  } else if (parts[1] == "down") {
    m.spin = Spin::down;
  } else {
    throw ParseError("bad spin: '" + std::string(parts[1]) + "'");
  }
  m.vib = parse_int(parts[2], "vib");
  if (m.vib < 0) throw ParseError("negative vibrational level");
  return m;
}

std::string format_double(double v) {
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", v);
  return buf.data();
}

}  // namespace

std::string to_text(const TwoParticleState& state) {
  std::string out = "statistics: " + to_string(state.statistics()) + "\n";
  for (const auto& [key, amp] : state.terms()) {
    out += to_string(key.first) + " | " + to_string(key.second) + " | " +
           format_double(amp.real()) + "," + format_double(amp.imag()) + "\n";
  }
  return out;
}

TwoParticleState from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::optional<Statistics> stats;
  std::vector<RawTerm> raw;
  while (std::getline(in, line)) {
    const auto body = trim(line);
    if (body.empty()) continue;
    if (!stats) {
      constexpr std::string_view prefix = "statistics:";
      if (!body.starts_with(prefix)) throw ParseError("missing statistics header");
      const auto kind = trim(body.substr(prefix.size()));
      if (kind == "boson") {
        stats = Statistics::boson();
      } else if (kind == "fermion") {
        stats = Statistics::fermion();
      } else {
        throw ParseError("unknown statistics '" + std::string(kind) + "'");
      }
      continue;
    }
    const auto fields = split(body, '|');
    if (fields.size() != 3) throw ParseError("term line needs three '|' fields: '" + line + "'");
    const auto re_im = split(fields[2], ',');
    if (re_im.size() != 2) throw ParseError("amplitude needs re,im");
    raw.push_back({parse_mode(fields[0]), parse_mode(fields[1]),
                   Amplitude{parse_double(re_im[0]), parse_double(re_im[1])}});
  }
  if (!stats) throw ParseError("empty input");
  return canonical_order(raw, *stats);
}

}  // namespace exchlab::fock
