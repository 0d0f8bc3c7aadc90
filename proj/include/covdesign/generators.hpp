#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>

#include "covdesign/baselines.hpp"
#include "covdesign/design_search.hpp"
#include "covdesign/eval.hpp"
#include "covdesign/synthesis.hpp"

namespace covdesign {

enum class DesignMethod { kRandom, kLhs, kSobol, kPdsDart, kSfsd, kProposed };

inline DesignMethod parse_method(const std::string& name) {
    if (name == "random") return DesignMethod::kRandom;
    if (name == "lhs") return DesignMethod::kLhs;
    if (name == "sobol") return DesignMethod::kSobol;
    if (name == "pds-dart") return DesignMethod::kPdsDart;
    if (name == "sfsd") return DesignMethod::kSfsd;
    if (name == "proposed") return DesignMethod::kProposed;
    throw std::invalid_argument("unknown design method: " + name);
}

inline const char* method_name(DesignMethod method) {
    switch (method) {
    case DesignMethod::kRandom: return "random";
    case DesignMethod::kLhs: return "lhs";
    case DesignMethod::kSobol: return "sobol";
    case DesignMethod::kPdsDart: return "pds-dart";
    case DesignMethod::kSfsd: return "sfsd";
    default: return "proposed";
    }
}

struct GeneratorOptions {
    int sobol_skip = 1;
    double dart_r_min = -1.0; // negative: 3/4 of the reference radius
    int dart_max_failures = 100000;
    int synth_iters = 1000;
    SearchOptions search;
    PcfParams oscillation; // defaults for the coverage searches
};

/// Build a (spec, seed) -> PointSet generator for one method. The coverage
/// families search their target once per (n, d) and synthesize a fresh
/// realization per seed.
inline DesignGenerator make_generator(DesignMethod method,
                                      const GeneratorOptions& options = {}) {
    switch (method) {
    case DesignMethod::kRandom:
        return [](const DesignSpec& spec, std::uint64_t seed) {
            return uniform_random(spec, seed);
        };
    case DesignMethod::kLhs:
        return [](const DesignSpec& spec, std::uint64_t seed) {
            return lhs(spec, seed);
        };
    case DesignMethod::kSobol:
        return [options](const DesignSpec& spec, std::uint64_t seed) {
            // the sequence is deterministic; distinct trials shift the skip
            const auto skip = options.sobol_skip + static_cast<int>(seed % 4096);
            return sobol(spec, skip);
        };
    case DesignMethod::kPdsDart:
        return [options](const DesignSpec& spec, std::uint64_t seed) {
            const double r_min = options.dart_r_min > 0.0
                                     ? options.dart_r_min
                                     : 0.75 * reference_radius(spec);
            return dart_throwing(r_min, spec, options.dart_max_failures, seed);
        };
    case DesignMethod::kSfsd:
    case DesignMethod::kProposed: {
        const PcfFamily family = method == DesignMethod::kSfsd
                                     ? PcfFamily::kSfsd
                                     : PcfFamily::kProposed;
        // one searched target per (n, d), shared across trial seeds
        auto cache = std::make_shared<
            std::map<std::pair<int, int>, RadialProfile>>();
        auto mutex = std::make_shared<std::mutex>();
        auto opts = options;
        return [family, cache, mutex, opts](const DesignSpec& spec,
                                            std::uint64_t seed) {
            RadialProfile target;
            {
                std::lock_guard<std::mutex> lock(*mutex);
                auto it = cache->find({spec.n, spec.d});
                if (it == cache->end()) {
                    const auto report = search_design(
                        spec, family, default_p0_grid(), opts.oscillation,
                        opts.search);
                    auto profile =
                        pcf_profile(report.params, default_radial_grid(spec));
                    it = cache->emplace(std::pair{spec.n, spec.d},
                                        std::move(profile))
                             .first;
                }
                target = it->second;
            }
            SynthesisConfig cfg;
            cfg.t_max = opts.synth_iters;
            cfg.seed = seed;
            auto [points, trace] = synthesize(target, spec, cfg);
            points.meta.method = family == PcfFamily::kSfsd ? "sfsd" : "proposed";
            return points;
        };
    }
    }
    throw std::invalid_argument("make_generator: unknown method");
}

} // namespace covdesign
