#include "scalefit/models.hpp"

#include <cmath>

#include "scalefit/error.hpp"

namespace scalefit {

namespace {

void require_fraction(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0))
        throw ValidationError(std::string(name) + " must lie in [0,1]");
}

}  // namespace

const char* model_kind_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::linear: return "linear";
        case ModelKind::amdahl: return "amdahl";
        case ModelKind::gustafson: return "gustafson";
        case ModelKind::superserial: return "superserial";
        case ModelKind::powerlaw: return "powerlaw";
    }
    return "?";
}

ModelParams ModelParams::linear() {
    ModelParams p;
    p.kind_ = ModelKind::linear;
    return p;
}

ModelParams ModelParams::amdahl(double sigma) {
    require_fraction(sigma, "sigma");
    ModelParams p;
    p.kind_ = ModelKind::amdahl;
    p.sigma_ = sigma;
    return p;
}

ModelParams ModelParams::gustafson(double sigma_prime) {
    require_fraction(sigma_prime, "sigma_prime");
    ModelParams p;
    p.kind_ = ModelKind::gustafson;
    p.sigma_prime_ = sigma_prime;
    return p;
}

ModelParams ModelParams::superserial(double sigma, double gamma) {
    require_fraction(sigma, "sigma");
    require_fraction(gamma, "gamma");
    ModelParams p;
    p.kind_ = ModelKind::superserial;
    p.sigma_ = sigma;
    p.gamma_ = gamma;
    return p;
}

ModelParams ModelParams::powerlaw(double a, double b) {
    if (!(b > 0.0)) throw ValidationError("b must be positive");
    if (!std::isfinite(a)) throw ValidationError("a must be finite");
    ModelParams p;
    p.kind_ = ModelKind::powerlaw;
    p.a_ = a;
    p.b_ = b;
    return p;
}

double eval_capacity(const ModelParams& params, double n) {
    if (!(n >= 1.0)) throw ValidationError("capacity is defined for n >= 1");
    switch (params.kind()) {
        case ModelKind::linear:
            return n;
        case ModelKind::amdahl:
            return n / (1.0 + params.sigma() * (n - 1.0));
        case ModelKind::gustafson:
            return n * n / (n + params.sigma_prime() * (n - 1.0));
        case ModelKind::superserial:
            return n / (1.0 + params.sigma() * ((n - 1.0) + params.gamma() * n * (n - 1.0)));
        case ModelKind::powerlaw:
            return params.b() * std::pow(n, params.a());
    }
    throw ValidationError("unknown model kind");
}

double amdahl_asymptote(double sigma) {
    if (!(sigma > 0.0 && sigma <= 1.0))
        throw ValidationError("capacity unbounded: asymptote needs sigma in (0,1]");
    return 1.0 / sigma;
}

CriticalPoint superserial_nc(double sigma, double gamma) {
    if (!(sigma > 0.0 && sigma <= 1.0) || !(gamma > 0.0 && gamma <= 1.0))
        throw ValidationError("critical point needs sigma and gamma in (0,1]");

    CriticalPoint cp;
    cp.n_real = std::sqrt((1.0 - sigma) / (sigma * gamma));

    const auto params = ModelParams::superserial(sigma, gamma);
    const double lo = std::max(1.0, std::floor(cp.n_real));
    const double hi = std::max(1.0, std::ceil(cp.n_real));
    cp.n_int = static_cast<int>(eval_capacity(params, hi) > eval_capacity(params, lo) ? hi : lo);
    return cp;
}

}  // namespace scalefit
