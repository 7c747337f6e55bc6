#include "kpist/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace kpist {

namespace {

struct PlanCache {
    std::mutex mu;
    std::map<std::tuple<int, int, int, int>, fftw_plan> plans;  // (kind, n0, n1, sign)

    fftw_plan get(int kind, int n0, int n1, int sign) {
        std::lock_guard<std::mutex> lock(mu);
        auto key = std::make_tuple(kind, n0, n1, sign);
        auto it = plans.find(key);
        if (it != plans.end()) return it->second;
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        fftw_plan p = nullptr;
        if (kind == 0) {
            std::vector<cplx> buf(n0);
            auto* b = reinterpret_cast<fftw_complex*>(buf.data());
            p = fftw_plan_dft_1d(n0, b, b, sign, flags);
        } else if (kind == 1) {
            std::vector<cplx> buf(static_cast<size_t>(n0) * n1);
            auto* b = reinterpret_cast<fftw_complex*>(buf.data());
            int nn[1] = {n0};
            p = fftw_plan_many_dft(1, nn, n1, b, nullptr, 1, n0, b, nullptr, 1, n0, sign, flags);
        } else {
            std::vector<cplx> buf(static_cast<size_t>(n0) * n1);
            auto* b = reinterpret_cast<fftw_complex*>(buf.data());
            p = fftw_plan_dft_2d(n0, n1, b, b, sign, flags);
        }
        plans[key] = p;
        return p;
    }
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

void run(int kind, int n0, int n1, int sign, cplx* data) {
    fftw_plan p = cache().get(kind, n0, n1, sign);
    auto* b = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(p, b, b);
}

}  // namespace

void fft_forward(cplx* data, int n) { run(0, n, 1, FFTW_FORWARD, data); }
void fft_inverse(cplx* data, int n) { run(0, n, 1, FFTW_BACKWARD, data); }
void fft_forward(CVec& v) { fft_forward(v.data(), static_cast<int>(v.size())); }
void fft_inverse(CVec& v) { fft_inverse(v.data(), static_cast<int>(v.size())); }

void fft_forward_rows(cplx* data, int n, int howmany) { run(1, n, howmany, FFTW_FORWARD, data); }
void fft_inverse_rows(cplx* data, int n, int howmany) { run(1, n, howmany, FFTW_BACKWARD, data); }

void fft2_forward(cplx* data, int n0, int n1) { run(2, n0, n1, FFTW_FORWARD, data); }
void fft2_inverse(cplx* data, int n0, int n1) { run(2, n0, n1, FFTW_BACKWARD, data); }

}  // namespace kpist
