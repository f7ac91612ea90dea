#include "sep/law.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <vector>

#include "sep/rng.hpp"

namespace sep {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

void check_rate(double p, const char* what) {
    require(p > 0.0 && p <= 1.0, what);
}

}  // namespace

EnvironmentLaw EnvironmentLaw::constant(double p) {
    check_rate(p, "constant law: p must lie in (0,1]");
    EnvironmentLaw law;
    law.family = LawFamily::Constant;
    law.p1 = p;
    return law;
}

EnvironmentLaw EnvironmentLaw::two_point(double p1, double p2, double alpha) {
    check_rate(p1, "two-point law: p1 must lie in (0,1]");
    check_rate(p2, "two-point law: p2 must lie in (0,1]");
    require(p1 != p2, "two-point law: p1 and p2 must differ");
    require(alpha >= 0.0 && alpha <= 1.0, "two-point law: alpha must lie in [0,1]");
    EnvironmentLaw law;
    law.family = LawFamily::TwoPoint;
    law.p1 = p1;
    law.p2 = p2;
    law.alpha = alpha;
    return law;
}

EnvironmentLaw EnvironmentLaw::uniform(double a, double b) {
    check_rate(a, "uniform law: a must lie in (0,1]");
    check_rate(b, "uniform law: b must lie in (0,1]");
    require(a < b, "uniform law: a must be < b");
    EnvironmentLaw law;
    law.family = LawFamily::Uniform;
    law.p1 = a;
    law.p2 = b;
    return law;
}

double EnvironmentLaw::essential_infimum() const {
    switch (family) {
        case LawFamily::Constant:
            return p1;
        case LawFamily::TwoPoint:
            if (alpha <= 0.0) return p2;
            if (alpha >= 1.0) return p1;
            return p1 < p2 ? p1 : p2;
        case LawFamily::Uniform:
            return p1;
    }
    throw std::logic_error("unreachable law family");
}

double EnvironmentLaw::cdf(double x) const {
    switch (family) {
        case LawFamily::Constant:
            return x >= p1 ? 1.0 : 0.0;
        case LawFamily::TwoPoint:
            return (x >= p1 ? alpha : 0.0) + (x >= p2 ? 1.0 - alpha : 0.0);
        case LawFamily::Uniform: {
            if (x <= p1) return 0.0;
            if (x >= p2) return 1.0;
            return (x - p1) / (p2 - p1);
        }
    }
    throw std::logic_error("unreachable law family");
}

double EnvironmentLaw::atom(double x) const {
    switch (family) {
        case LawFamily::Constant:
            return x == p1 ? 1.0 : 0.0;
        case LawFamily::TwoPoint:
            if (x == p1) return alpha;
            if (x == p2) return 1.0 - alpha;
            return 0.0;
        case LawFamily::Uniform:
            return 0.0;
    }
    throw std::logic_error("unreachable law family");
}

double EnvironmentLaw::draw(SplitMix64& rng) const {
    switch (family) {
        case LawFamily::Constant:
            return p1;
        case LawFamily::TwoPoint:
            return rng.uniform01() < alpha ? p1 : p2;
        case LawFamily::Uniform:
            return p1 + (p2 - p1) * rng.uniform01();
    }
    throw std::logic_error("unreachable law family");
}

std::string EnvironmentLaw::to_string() const {
    switch (family) {
        case LawFamily::Constant:
            return "constant(" + fmt(p1) + ")";
        case LawFamily::TwoPoint:
            return "twopoint(" + fmt(p1) + "," + fmt(p2) + "," + fmt(alpha) + ")";
        case LawFamily::Uniform:
            return "uniform(" + fmt(p1) + "," + fmt(p2) + ")";
    }
    throw std::logic_error("unreachable law family");
}

EnvironmentLaw parse_law(const std::string& text) {
    // strip whitespace, lowercase
    std::string s;
    for (char ch : text) {
        if (!std::isspace(static_cast<unsigned char>(ch)))
            s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
    auto open = s.find('(');
    require(open != std::string::npos && !s.empty() && s.back() == ')',
            "law must look like name(args)");
    std::string name = s.substr(0, open);
    std::string args = s.substr(open + 1, s.size() - open - 2);

    std::vector<double> vals;
    size_t pos = 0;
    while (pos <= args.size()) {
        size_t comma = args.find(',', pos);
        std::string piece = args.substr(pos, comma == std::string::npos ? args.size() - pos
                                                                        : comma - pos);
        require(!piece.empty(), "law argument list malformed");
        size_t used = 0;
        double v;
        try {
            v = std::stod(piece, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("law argument is not a number: " + piece);
        }
        require(used == piece.size(), "law argument has trailing characters");
        vals.push_back(v);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }

    if (name == "constant") {
        require(vals.size() == 1, "constant law takes 1 argument");
        return EnvironmentLaw::constant(vals[0]);
    }
    if (name == "twopoint") {
        require(vals.size() == 3, "twopoint law takes 3 arguments");
        return EnvironmentLaw::two_point(vals[0], vals[1], vals[2]);
    }
    if (name == "uniform") {
        require(vals.size() == 2, "uniform law takes 2 arguments");
        return EnvironmentLaw::uniform(vals[0], vals[1]);
    }
    throw std::invalid_argument("unknown law family: " + name);
}

double ballistic_expectation(const EnvironmentLaw& law) {
    switch (law.family) {
        case LawFamily::Constant:
            return (1.0 - law.p1) / law.p1;
        case LawFamily::TwoPoint:
            return law.alpha * (1.0 - law.p1) / law.p1 +
                   (1.0 - law.alpha) * (1.0 - law.p2) / law.p2;
        case LawFamily::Uniform:
            // E[1/w] - 1 with 1/w integrated in closed form
            return std::log(law.p2 / law.p1) / (law.p2 - law.p1) - 1.0;
    }
    throw std::logic_error("unreachable law family");
}

const char* RegimeClass::name() const {
    switch (kind) {
        case NonNestling:
            return "non-nestling";
        case MarginalNestling:
            return "marginal-nestling";
        case PlainNestling:
            return "plain-nestling";
    }
    return "unknown";
}

RegimeClass classify(const EnvironmentLaw& law) {
    RegimeClass rc;
    rc.ballistic_mean = ballistic_expectation(law);
    if (!(rc.ballistic_mean < 1.0))
        throw std::domain_error("law is not ballistic: E[(1-w)/w] = " + fmt(rc.ballistic_mean));

    double essinf = law.essential_infimum();
    if (essinf > 0.5) {
        rc.kind = RegimeClass::NonNestling;
        rc.epsilon = essinf - 0.5;
        return rc;
    }
    if (essinf == 0.5) {
        rc.kind = RegimeClass::MarginalNestling;
        rc.atom_at_half = law.atom(0.5) > 0.0;
        return rc;
    }
    rc.kind = RegimeClass::PlainNestling;
    // Pick the grid gamma maximizing the lower-bound exponent
    // ln(q)/(2 ln(1/beta)), q = (1/2+gamma)/(1/2-gamma), among gammas whose
    // beta = P(w <= 1/2-gamma) is positive.
    double best = -1.0;
    for (int i = 1; i <= 9; ++i) {
        double gamma = 0.05 * i;
        double beta = law.cdf(0.5 - gamma);
        if (beta <= 0.0) continue;
        double expo = std::log((0.5 + gamma) / (0.5 - gamma)) / (2.0 * std::log(1.0 / beta));
        if (expo > best) {
            best = expo;
            rc.beta = beta;
            rc.gamma = gamma;
        }
    }
    if (best < 0.0) {
        // The sub-half mass sits strictly inside the coarsest grid step
        // (essinf in (0.45, 0.5)); fall back to half the available room,
        // which always has positive tail mass.
        rc.gamma = 0.5 * (0.5 - essinf);
        rc.beta = law.cdf(0.5 - rc.gamma);
    }
    return rc;
}

NestlingExponent plain_nestling_exponent(double beta, double gamma, double delta_tilde) {
    if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("beta must lie in (0,1)");
    if (!(gamma > 0.0 && gamma < 0.5)) throw std::invalid_argument("gamma must lie in (0,1/2)");
    if (!(delta_tilde > 0.0 && delta_tilde < 1.0))
        throw std::invalid_argument("delta_tilde must lie in (0,1)");
    double q = (0.5 + gamma) / (0.5 - gamma);
    NestlingExponent out;
    out.value = delta_tilde * std::log(q) / (2.0 * std::log(1.0 / beta));
    out.feasible = out.value < 0.5;
    return out;
}

}  // namespace sep
