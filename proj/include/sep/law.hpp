#pragma once

#include <cstdint>
#include <string>

namespace sep {

enum class LawFamily { Constant, TwoPoint, Uniform };

// Law of a single jump rate omega in (0,1]. TwoPoint puts mass alpha on p1 and
// 1-alpha on p2; Uniform is the continuous law on the closed interval [a,b].
struct EnvironmentLaw {
    LawFamily family = LawFamily::Constant;
    double p1 = 0.5;     // Constant p / TwoPoint p1 / Uniform a
    double p2 = 0.0;     // TwoPoint p2 / Uniform b
    double alpha = 0.0;  // TwoPoint mass on p1

    static EnvironmentLaw constant(double p);
    static EnvironmentLaw two_point(double p1, double p2, double alpha);
    static EnvironmentLaw uniform(double a, double b);

    double essential_infimum() const;
    // P(omega <= x) and P(omega == x)
    double cdf(double x) const;
    double atom(double x) const;
    double draw(struct SplitMix64& rng) const;
    std::string to_string() const;
};

// Parses "constant(p)", "twopoint(p1,p2,alpha)", "uniform(a,b)".
// Throws std::invalid_argument on malformed input.
EnvironmentLaw parse_law(const std::string& text);

// E[(1-omega)/omega], closed form per family.
double ballistic_expectation(const EnvironmentLaw& law);

struct RegimeClass {
    enum Kind { NonNestling, MarginalNestling, PlainNestling } kind;
    double ballistic_mean = 0.0;
    // NonNestling: distance of the support's infimum above 1/2
    double epsilon = 0.0;
    // MarginalNestling: whether the law puts positive mass on 1/2
    bool atom_at_half = false;
    // PlainNestling: beta = P(omega <= 1/2 - gamma), with gamma picked from
    // the grid to maximize the lower-bound exponent (gamma = 0, beta = 0 when
    // no grid point carries mass)
    double beta = 0.0;
    double gamma = 0.0;

    const char* name() const;
};

// Classification of a ballistic law (throws if ballistic_expectation >= 1).
// PlainNestling gamma is searched on the fixed grid {0.05 k : k = 1..9}.
RegimeClass classify(const EnvironmentLaw& law);

struct NestlingExponent {
    double value = 0.0;
    bool feasible = false;  // value < 1/2, which every ballistic (beta, gamma) satisfies
};

// Lower-bound exponent delta = delta_tilde * ln(q) / (2 ln(1/beta)) with
// q = (1/2+gamma)/(1/2-gamma). Throws for gamma >= 1/2 or parameters
// outside (0,1).
NestlingExponent plain_nestling_exponent(double beta, double gamma, double delta_tilde);

}  // namespace sep
