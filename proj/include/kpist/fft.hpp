#pragma once

#include "kpist/grid.hpp"

namespace kpist {

// In-place unnormalized complex FFTs backed by FFTW.
// forward: X_m = sum_j x_j e^{-2 pi i jm/n}; inverse: conjugate kernel, no 1/n.
// Plans are created with FFTW_ESTIMATE|FFTW_UNALIGNED, so the same input
// always produces bitwise-identical output regardless of buffer alignment.
void fft_forward(cplx* data, int n);
void fft_inverse(cplx* data, int n);
void fft_forward(CVec& v);
void fft_inverse(CVec& v);

// Batched transforms of `howmany` contiguous rows of length n.
void fft_forward_rows(cplx* data, int n, int howmany);
void fft_inverse_rows(cplx* data, int n, int howmany);

// 2D transforms of a row-major n0 x n1 array.
void fft2_forward(cplx* data, int n0, int n1);
void fft2_inverse(cplx* data, int n0, int n1);

}  // namespace kpist
