#include "cfsim.h"

#include <cstring>
#include <new>
#include <string>

#include "cf/reports.hpp"

struct cfs_scenario {
  cf::SpecFile spec;
};

struct cfs_report {
  std::string json_text;
};

namespace {

void write_error(char* errbuf, size_t errcap, const std::string& message) {
  if (errbuf == nullptr || errcap == 0) return;
  const size_t n = std::min(message.size(), errcap - 1);
  std::memcpy(errbuf, message.data(), n);
  errbuf[n] = '\0';
}

// Runs a report builder, translating the C++ error idiom into status codes.
template <typename Fn>
cfs_status guarded(Fn&& fn, cfs_report** out, char* errbuf, size_t errcap) {
  if (out == nullptr) {
    write_error(errbuf, errcap, "output handle is null");
    return CFS_ERROR_BAD_ARGUMENT;
  }
  *out = nullptr;
  try {
    cf::json report = fn();
    *out = new cfs_report{report.dump()};
    return CFS_OK;
  } catch (const cf::ParseError& e) {
    write_error(errbuf, errcap, e.what());
    return CFS_ERROR_PARSE;
  } catch (const cf::InvariantError& e) {
    write_error(errbuf, errcap, e.what());
    return CFS_ERROR_INVARIANT;
  } catch (const std::invalid_argument& e) {
    write_error(errbuf, errcap, e.what());
    return CFS_ERROR_BAD_ARGUMENT;
  } catch (const std::bad_alloc&) {
    write_error(errbuf, errcap, "out of memory");
    return CFS_ERROR_INTERNAL;
  } catch (const std::exception& e) {
    write_error(errbuf, errcap, e.what());
    return CFS_ERROR_INTERNAL;
  }
}

cfs_status parse_scenario(const char* source, bool is_path, cfs_scenario** out,
                          char* errbuf, size_t errcap) {
  if (out == nullptr || source == nullptr) {
    write_error(errbuf, errcap, "null argument");
    return CFS_ERROR_BAD_ARGUMENT;
  }
  *out = nullptr;
  try {
    cf::SpecFile spec =
        is_path ? cf::SpecFile::load(source) : cf::SpecFile::parse(source);
    *out = new cfs_scenario{std::move(spec)};
    return CFS_OK;
  } catch (const cf::ParseError& e) {
    write_error(errbuf, errcap, e.what());
    return CFS_ERROR_PARSE;
  } catch (const cf::InvariantError& e) {
    write_error(errbuf, errcap, e.what());
    return CFS_ERROR_INVARIANT;
  } catch (const std::exception& e) {
    write_error(errbuf, errcap, e.what());
    return CFS_ERROR_PARSE;
  }
}

}  // namespace

extern "C" {

const char* cfs_version(void) { return cf::kToolVersion; }

cfs_status cfs_scenario_parse_text(const char* text, cfs_scenario** out,
                                   char* errbuf, size_t errcap) {
  return parse_scenario(text, false, out, errbuf, errcap);
}

cfs_status cfs_scenario_parse_file(const char* path, cfs_scenario** out,
                                   char* errbuf, size_t errcap) {
  return parse_scenario(path, true, out, errbuf, errcap);
}

void cfs_scenario_free(cfs_scenario* scenario) { delete scenario; }

cfs_status cfs_scenario_set_tol(cfs_scenario* scenario, double tol) {
  if (scenario == nullptr || !(tol > 0.0 && tol < 1.0)) {
    return CFS_ERROR_BAD_ARGUMENT;
  }
  scenario->spec.tol = tol;
  return CFS_OK;
}

cfs_status cfs_simulate(const cfs_scenario* scenario, int reverse,
                        cfs_report** out, char* errbuf, size_t errcap) {
  if (scenario == nullptr) {
    write_error(errbuf, errcap, "scenario handle is null");
    return CFS_ERROR_BAD_ARGUMENT;
  }
  return guarded(
      [&] { return cf::simulate_report(scenario->spec, reverse != 0); }, out,
      errbuf, errcap);
}

cfs_status cfs_membership(const char* behavior_json, double tol,
                          cfs_report** out, char* errbuf, size_t errcap) {
  if (behavior_json == nullptr) {
    write_error(errbuf, errcap, "behavior JSON is null");
    return CFS_ERROR_BAD_ARGUMENT;
  }
  return guarded(
      [&] {
        cf::json doc;
        try {
          doc = cf::json::parse(behavior_json);
        } catch (const cf::json::exception& e) {
          throw cf::ParseError(1, std::string("invalid JSON: ") + e.what());
        }
        cf::BehaviorTable bt;
        try {
          bt = cf::behavior_from_json(doc);
        } catch (const std::invalid_argument& e) {
          throw cf::ParseError(1, e.what());
        }
        return cf::membership_report(bt, tol);
      },
      out, errbuf, errcap);
}

cfs_status cfs_lemmas(int samples, unsigned long long seed, double tol,
                      cfs_report** out, char* errbuf, size_t errcap) {
  return guarded([&] { return cf::lemmas_report(samples, seed, tol); }, out,
                 errbuf, errcap);
}

cfs_status cfs_boxworld(cfs_report** out, char* errbuf, size_t errcap) {
  return guarded([] { return cf::boxworld_report(); }, out, errbuf, errcap);
}

cfs_status cfs_sweep(const cfs_scenario* scenario, int grid, int refine,
                     unsigned long long seed, cfs_report** out, char* errbuf,
                     size_t errcap) {
  return guarded(
      [&] {
        return cf::sweep_report(scenario ? &scenario->spec : nullptr, grid,
                                refine, seed);
      },
      out, errbuf, errcap);
}

cfs_status cfs_wigner_demo(cfs_report** out, char* errbuf, size_t errcap) {
  return guarded([] { return cf::wigner_demo_report(); }, out, errbuf, errcap);
}

const char* cfs_report_json(const cfs_report* report) {
  return report == nullptr ? nullptr : report->json_text.c_str();
}

void cfs_report_free(cfs_report* report) { delete report; }

}  // extern "C"
