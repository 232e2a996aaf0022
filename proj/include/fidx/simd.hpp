#pragma once

// Feature gates for the vectorized decode and dot-product paths. Every SIMD
// routine has a portable counterpart with identical semantics; builds without
// these ISA extensions fall back to it automatically.

#if defined(__x86_64__) || defined(_M_X64)
#if defined(__SSSE3__)
#define FIDX_SIMD_SSSE3 1
#endif
#if defined(__AVX2__) && defined(__FMA__)
#define FIDX_SIMD_AVX2 1
#endif
#if defined(__F16C__)
#define FIDX_SIMD_F16C 1
#endif
#endif

#if defined(FIDX_SIMD_SSSE3) || defined(FIDX_SIMD_AVX2)
#include <immintrin.h>
#endif
