#include "atr/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string_view>

namespace atr::kernels {

namespace scalar {

void axpy(double* y, double a, const double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale(double* y, double a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] *= a;
}

double max_abs(const double* x, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::fmax(m, std::fabs(x[i]));
    return m;
}

}  // namespace scalar

namespace {

struct Table {
    void (*axpy)(double*, double, const double*, std::size_t);
    void (*scale)(double*, double, std::size_t);
    double (*max_abs)(const double*, std::size_t);
};

constexpr Table scalar_table{scalar::axpy, scalar::scale, scalar::max_abs};

Table table_for(Isa isa) {
    switch (isa) {
#if defined(__x86_64__) || defined(_M_X64)
        case Isa::avx2: return {avx2::axpy, avx2::scale, avx2::max_abs};
#endif
#if defined(__aarch64__)
        case Isa::neon: return {neon::axpy, neon::scale, neon::max_abs};
#endif
        default: return scalar_table;
    }
}

Isa detect() {
    if (const char* env = std::getenv("ATR_SIMD")) {
        const std::string_view v(env);
        if (v == "scalar") return Isa::scalar;
        if (v == "avx2" && isa_available(Isa::avx2)) return Isa::avx2;
        if (v == "neon" && isa_available(Isa::neon)) return Isa::neon;
    }
    if (isa_available(Isa::avx2)) return Isa::avx2;
    if (isa_available(Isa::neon)) return Isa::neon;
    return Isa::scalar;
}

struct Dispatch {
    std::atomic<Isa> isa;
    Table table;

    Dispatch() : isa(detect()), table(table_for(isa.load())) {}
};

Dispatch& dispatch() {
    static Dispatch d;
    return d;
}

}  // namespace

const char* isa_name(Isa isa) {
    switch (isa) {
        case Isa::avx2: return "avx2";
        case Isa::neon: return "neon";
        default: return "scalar";
    }
}

bool isa_available(Isa isa) {
    switch (isa) {
        case Isa::scalar: return true;
#if defined(__x86_64__) || defined(_M_X64)
        case Isa::avx2: return __builtin_cpu_supports("avx2");
#endif
#if defined(__aarch64__)
        case Isa::neon: return true;
#endif
        default: return false;
    }
}

Isa active_isa() { return dispatch().isa.load(); }

bool set_isa(Isa isa) {
    if (!isa_available(isa)) return false;
    auto& d = dispatch();
    d.table = table_for(isa);
    d.isa = isa;
    return true;
}

void axpy(std::span<double> y, double a, std::span<const double> x) {
    dispatch().table.axpy(y.data(), a, x.data(), y.size());
}

void scale(std::span<double> y, double a) { dispatch().table.scale(y.data(), a, y.size()); }

double max_abs(std::span<const double> x) { return dispatch().table.max_abs(x.data(), x.size()); }

}  // namespace atr::kernels
