#include "cf/specfile.hpp"

#include <cmath>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace cf {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_real(std::string_view token, int line, const std::string& what) {
  token = trim(token);
  double value = 0.0;
  const auto* begin = token.data();
  const auto* end = token.data() + token.size();
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw ParseError(line, "expected a real number for " + what + ", got '" +
                               std::string(token) + "'");
  }
  return value;
}

BlochVector parse_bloch(std::string_view value, int line,
                        const std::string& key) {
  double comp[3];
  std::size_t start = 0;
  for (int i = 0; i < 3; ++i) {
    const auto comma = value.find(',', start);
    const bool last = i == 2;
    if (last != (comma == std::string_view::npos)) {
      throw ParseError(line, key + ": expected three comma-separated reals");
    }
    const std::string_view token =
        last ? value.substr(start) : value.substr(start, comma - start);
    comp[i] = parse_real(token, line, key);
    start = comma + 1;
  }
  try {
    return BlochVector::normalized(comp[0], comp[1], comp[2]);
  } catch (const std::invalid_argument& e) {
    throw ParseError(line, key + ": " + e.what());
  }
}

}  // namespace

SpecFile SpecFile::parse(std::string_view text) {
  std::map<std::string, std::pair<std::string, int>> entries;
  int line_number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = nl == std::string_view::npos
                                ? text.substr(pos)
                                : text.substr(pos, nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_number;

    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(line_number, "expected 'key = value'");
    }
    const std::string key{trim(line.substr(0, eq))};
    const std::string value{trim(line.substr(eq + 1))};
    if (key.empty()) throw ParseError(line_number, "empty key");
    if (entries.count(key)) {
      throw ParseError(line_number, "duplicate key '" + key + "'");
    }
    entries[key] = {value, line_number};
  }

  const auto take = [&](const std::string& key)
      -> std::optional<std::pair<std::string, int>> {
    const auto it = entries.find(key);
    if (it == entries.end()) return std::nullopt;
    auto out = it->second;
    entries.erase(it);
    return out;
  };

  std::string kind = "maximally_mixed";
  double polar = 0.0, azimuthal = 0.0;
  DensityMatrix input = DensityMatrix::maximally_mixed(2);
  if (const auto entry = take("input_state")) {
    std::istringstream is(entry->first);
    std::string tag;
    is >> tag;
    if (tag == "maximally_mixed") {
      std::string rest;
      if (is >> rest) {
        throw ParseError(entry->second, "maximally_mixed takes no arguments");
      }
    } else if (tag == "pure") {
      std::string p1, p2, rest;
      if (!(is >> p1 >> p2) || (is >> rest)) {
        throw ParseError(entry->second,
                         "pure takes polar and azimuthal angles in radians");
      }
      polar = parse_real(p1, entry->second, "polar angle");
      azimuthal = parse_real(p2, entry->second, "azimuthal angle");
      kind = "pure";
      const cnum phase{std::cos(azimuthal), std::sin(azimuthal)};
      input = DensityMatrix::pure(
          {cnum{std::cos(polar / 2.0), 0.0}, phase * std::sin(polar / 2.0)});
    } else {
      throw ParseError(entry->second,
                       "input_state must be 'maximally_mixed' or 'pure'");
    }
  }

  BlochVector observables[4];
  const char* names[4] = {"charlie", "alice", "debbie", "bob"};
  for (int i = 0; i < 4; ++i) {
    const auto entry = take(names[i]);
    if (!entry) {
      throw ParseError(line_number,
                       std::string("missing required key '") + names[i] + "'");
    }
    observables[i] = parse_bloch(entry->first, entry->second, names[i]);
  }

  double tol = 1e-9;
  if (const auto entry = take("tol")) {
    tol = parse_real(entry->first, entry->second, "tol");
    if (!(tol > 0.0 && tol < 1.0)) {
      throw ParseError(entry->second, "tol must lie in (0,1)");
    }
  }
  std::uint64_t seed = 0;
  if (const auto entry = take("seed")) {
    const double value = parse_real(entry->first, entry->second, "seed");
    if (value < 0.0 || value != std::floor(value)) {
      throw ParseError(entry->second, "seed must be a nonnegative integer");
    }
    seed = static_cast<std::uint64_t>(value);
  }

  if (!entries.empty()) {
    const auto& [key, value] = *entries.begin();
    throw ParseError(value.second, "unknown key '" + key + "'");
  }

  return SpecFile{ScenarioConfig(std::move(input), observables[0],
                                 observables[1], observables[2],
                                 observables[3]),
                  kind, polar, azimuthal, tol, seed};
}

SpecFile SpecFile::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open scenario file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

}  // namespace cf
