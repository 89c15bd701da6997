#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "portphase/confluence.hpp"
#include "portphase/connections.hpp"
#include "portphase/subtractions.hpp"

namespace portphase {

// mt19937_64 is fully specified by the standard; the distributions below are
// written out so streams are identical across standard libraries.
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}
    double uniform();  // [0, 1)
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    double normal();
    int integer(int lo, int hi);  // inclusive
    cplx complex_normal() { return {normal() * 0.7071067811865476, normal() * 0.7071067811865476}; }

private:
    std::mt19937_64 eng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

uint64_t derive_seed(uint64_t base, uint64_t index);

inline constexpr double kConditionLimit = 1e4;

CMatrix random_nonsingular(int n, Rng& rng, double cond_limit = kConditionLimit);
CMatrix random_complex(int rows, int cols, Rng& rng);
RMatrix random_real(int rows, int cols, Rng& rng);
// Interval of width in [0, max_width] with lo uniform in [-pi, pi).
PhaseInterval random_interval(Rng& rng, double max_width);
// C = T^* D T with phases drawn from J. If computed is given it receives the
// verified phase interval of C.
CMatrix random_sectorial(int n, const PhaseInterval& J, Rng& rng, PhaseInterval* computed = nullptr);
// Sum of rank-one congruences v v^T z(s) of random resistors, inductors and
// capacitors; order counts the reactive elements.
RationalMatrix random_passive_network(int n, int order, Rng& rng);
// Random confluence with n = na = nb = nc and dim G uniform in [n, 2n].
ConfluenceRep random_confluence(int n, Rng& rng);

struct SuiteOptions {
    int trials = 1000;
    uint64_t seed = 1;
    std::string dump_dir;  // empty: no dumps
};

struct SuiteReport {
    std::string name;
    long trials = 0;
    long passed = 0;
    long skipped = 0;           // trials whose result was outside the property's scope
    double worst = -1e300;      // largest excess over the bound (rad, or relative error for oracle suites)
    std::vector<uint64_t> failing_seeds;
    std::vector<std::string> notes;

    long failed() const { return trials - passed - skipped; }
    bool ok() const { return failed() == 0; }
};

std::string format_report(const SuiteReport& r);

SuiteReport check_lemma(int which, const SuiteOptions& opt);  // 1..6
SuiteReport check_prop1(const SuiteOptions& opt);
SuiteReport check_prop2(const SuiteOptions& opt);
// Trials are per kind.
SuiteReport check_theorem1(const SuiteOptions& opt, const std::vector<ConnectionKind>& kinds = {});
SuiteReport check_theorem2(const SuiteOptions& opt, const std::vector<SubtractionKind>& kinds = {});
// Builtin representations against the direct formulas, plus parametrization invariance.
SuiteReport check_theorem3(const SuiteOptions& opt, const std::vector<std::string>& reps = {});
SuiteReport check_parametrization(const SuiteOptions& opt);
SuiteReport check_theorem4(const SuiteOptions& opt);

std::vector<ConnectionKind> theorem1_kinds();
std::vector<SubtractionKind> all_subtractions();
std::vector<std::string> suite_names();
SuiteReport run_suite(const std::string& name, const SuiteOptions& opt);

}  // namespace portphase
