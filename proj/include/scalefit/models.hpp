#pragma once

#include <string>

namespace scalefit {

enum class ModelKind { linear, amdahl, gustafson, superserial, powerlaw };

const char* model_kind_name(ModelKind kind);

/// Parameters of one scalability model. Construct through the factory
/// functions, which validate ranges eagerly; evaluation never clamps.
///
/// Capacity formulas, with N the core count:
///   linear      C(N) = N
///   amdahl      C(N) = N / (1 + sigma*(N-1))
///   gustafson   C(N) = N^2 / (N + sigma_prime*(N-1))
///   superserial C(N) = N / (1 + sigma*((N-1) + gamma*N*(N-1)))
///   powerlaw    C(N) = b * N^a
class ModelParams {
  public:
    static ModelParams linear();
    static ModelParams amdahl(double sigma);
    static ModelParams gustafson(double sigma_prime);
    static ModelParams superserial(double sigma, double gamma);
    static ModelParams powerlaw(double a, double b);

    ModelKind kind() const { return kind_; }
    double sigma() const { return sigma_; }
    double sigma_prime() const { return sigma_prime_; }
    double gamma() const { return gamma_; }
    double a() const { return a_; }
    double b() const { return b_; }

  private:
    ModelParams() = default;
    ModelKind kind_ = ModelKind::linear;
    double sigma_ = 0.0;        // serial fraction, amdahl / superserial
    double sigma_prime_ = 0.0;  // serial fraction with one processor, gustafson
    double gamma_ = 0.0;        // serial fraction spent on communication
    double a_ = 0.0;            // power-law exponent
    double b_ = 0.0;            // power-law dimensionality coefficient
};

/// Scaling capacity of the model at n cores (n >= 1; real-valued n is
/// accepted so model curves can be traced between tested core counts).
double eval_capacity(const ModelParams& params, double n);

/// Capacity ceiling 1/sigma that the Amdahl model approaches as N grows.
/// Throws ValidationError for sigma = 0 (capacity is unbounded).
double amdahl_asymptote(double sigma);

struct CriticalPoint {
    double n_real = 0.0;  // real-valued argmax of the superserial capacity
    int n_int = 0;        // floor/ceil of n_real, whichever has larger capacity
};

/// Core count maximizing the superserial capacity; beyond it adding cores
/// reduces performance. Setting dC/dN = 0 gives
/// n_real = sqrt((1 - sigma) / (sigma * gamma)). Requires sigma, gamma > 0.
CriticalPoint superserial_nc(double sigma, double gamma);

}  // namespace scalefit
