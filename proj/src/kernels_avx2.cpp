// Compiled with -mavx2 (no FMA): every multiply and add rounds separately,
// matching the scalar kernels bit for bit.
#include "neuroring/kernels.hpp"

#include <immintrin.h>

namespace neuroring::kernels
{

std::size_t lif_update_avx2(const Propagators& prop, const LifLanes& lanes)
{
    const __m256d alpha = _mm256_set1_pd(prop.alpha);
    const __m256d beta = _mm256_set1_pd(prop.beta);
    const __m256d p21 = _mm256_set1_pd(prop.p21);
    const __m256d drive = _mm256_set1_pd(prop.drive);
    const __m256d v_th = _mm256_set1_pd(prop.v_th);
    const __m256d v_reset = _mm256_set1_pd(prop.v_reset);
    const __m128i ref_steps = _mm_set1_epi32(prop.ref_steps);
    const __m128i zero32 = _mm_setzero_si128();
    const __m256d zero = _mm256_setzero_pd();
    // gathers the low dword of each 64-bit lane
    const __m256i low_dwords = _mm256_setr_epi32(0, 2, 4, 6, 0, 2, 4, 6);

    std::size_t bad = all_finite;
    std::size_t k = 0;
    for (; k + 4 <= lanes.n; k += 4)
    {
        const __m256d v_old = _mm256_loadu_pd(lanes.v + k);
        const __m256d i_old = _mm256_loadu_pd(lanes.i_syn + k);
        const __m256d input = _mm256_loadu_pd(lanes.input + k);

        __m256d v = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(alpha, v_old), drive), _mm256_mul_pd(p21, i_old));
        const __m256d i_syn = _mm256_add_pd(_mm256_mul_pd(beta, i_old), input);

        // x - x is 0 for finite x and NaN otherwise
        const __m256d finite = _mm256_and_pd(_mm256_cmp_pd(_mm256_sub_pd(v, v), zero, _CMP_EQ_OQ),
                                             _mm256_cmp_pd(_mm256_sub_pd(i_syn, i_syn), zero, _CMP_EQ_OQ));
        const int finite_bits = _mm256_movemask_pd(finite);
        if (finite_bits != 0xF && bad == all_finite)
            bad = k + static_cast<std::size_t>(__builtin_ctz(~finite_bits & 0xF));

        const __m128i ref = _mm_loadu_si128(reinterpret_cast<const __m128i*>(lanes.ref + k));
        const __m128i refractory32 = _mm_cmpgt_epi32(ref, zero32);
        const __m256d refractory = _mm256_castsi256_pd(_mm256_cvtepi32_epi64(refractory32));
        const __m256d above = _mm256_cmp_pd(v, v_th, _CMP_GT_OQ);
        const __m256d spike = _mm256_andnot_pd(refractory, above);

        v = _mm256_blendv_pd(v, v_reset, _mm256_or_pd(refractory, above));

        const __m128i spike32 =
            _mm256_castsi256_si128(_mm256_permutevar8x32_epi32(_mm256_castpd_si256(spike), low_dwords));
        __m128i ref_new = _mm_add_epi32(ref, refractory32);
        ref_new = _mm_blendv_epi8(ref_new, ref_steps, spike32);

        _mm256_storeu_pd(lanes.v + k, v);
        _mm256_storeu_pd(lanes.i_syn + k, i_syn);
        _mm_storeu_si128(reinterpret_cast<__m128i*>(lanes.ref + k), ref_new);

        const int spike_bits = _mm256_movemask_pd(spike);
        for (int j = 0; j < 4; ++j)
            lanes.spiked[k + j] = static_cast<std::uint8_t>((spike_bits >> j) & 1);
    }

    if (k < lanes.n)
    {
        LifLanes tail{lanes.v + k, lanes.i_syn + k, lanes.ref + k, lanes.input + k, lanes.spiked + k, lanes.n - k};
        const std::size_t tail_bad = lif_update_scalar(prop, tail);
        if (bad == all_finite && tail_bad != all_finite)
            bad = k + tail_bad;
    }
    return bad;
}

namespace
{

struct Lanes8
{
    __m256i hi;
    __m256i lo;
};

// 32x32 -> 64 multiply of every lane against a constant, split into halves.
inline Lanes8 mulhilo(__m256i x, __m256i m)
{
    const __m256i even = _mm256_mul_epu32(x, m);
    const __m256i odd = _mm256_mul_epu32(_mm256_srli_epi64(x, 32), m);
    return {_mm256_blend_epi32(_mm256_srli_epi64(even, 32), odd, 0b10101010),
            _mm256_blend_epi32(even, _mm256_slli_epi64(odd, 32), 0b10101010)};
}

// Exact uint32 -> double for four lanes.
inline __m256d u32_to_pd(__m128i x)
{
    const __m128i flipped = _mm_xor_si128(x, _mm_set1_epi32(static_cast<int>(0x80000000u)));
    return _mm256_add_pd(_mm256_cvtepi32_pd(flipped), _mm256_set1_pd(2147483648.0));
}

} // namespace

void poisson_draw_avx2(double p, std::uint64_t seed, std::uint32_t first_neuron, std::uint64_t step,
                       std::uint8_t* spiked, std::size_t n)
{
    if (!(p > 0.0))
    {
        for (std::size_t k = 0; k < n; ++k)
            spiked[k] = 0;
        return;
    }

    const __m256i m0 = _mm256_set1_epi64x(0xD2511F53u);
    const __m256i m1 = _mm256_set1_epi64x(0xCD9E8D57u);
    const __m256i lane_offsets = _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7);
    const __m256i mask11 = _mm256_set1_epi32(0x7FF);
    const __m256d two32 = _mm256_set1_pd(4294967296.0);
    const __m256d two_m53 = _mm256_set1_pd(0x1.0p-53);
    const __m256d threshold = _mm256_set1_pd(p);
    const auto stream_word = static_cast<int>(std::uint32_t{static_cast<std::uint8_t>(Stream::poisson)} << 24);

    std::size_t k = 0;
    for (; k + 8 <= n; k += 8)
    {
        __m256i c0 = _mm256_set1_epi32(static_cast<int>(static_cast<std::uint32_t>(step)));
        __m256i c1 = _mm256_set1_epi32(static_cast<int>(static_cast<std::uint32_t>(step >> 32)));
        __m256i c2 = _mm256_add_epi32(_mm256_set1_epi32(static_cast<int>(first_neuron + static_cast<std::uint32_t>(k))),
                                      lane_offsets);
        __m256i c3 = _mm256_set1_epi32(stream_word);
        std::uint32_t k0 = static_cast<std::uint32_t>(seed);
        std::uint32_t k1 = static_cast<std::uint32_t>(seed >> 32);

        for (int round = 0; round < 10; ++round)
        {
            const Lanes8 p0 = mulhilo(c0, m0);
            const Lanes8 p1 = mulhilo(c2, m1);
            const __m256i key0 = _mm256_set1_epi32(static_cast<int>(k0));
            const __m256i key1 = _mm256_set1_epi32(static_cast<int>(k1));
            c0 = _mm256_xor_si256(_mm256_xor_si256(p1.hi, c1), key0);
            c1 = p1.lo;
            c2 = _mm256_xor_si256(_mm256_xor_si256(p0.hi, c3), key1);
            c3 = p0.lo;
            k0 += 0x9E3779B9u;
            k1 += 0xBB67AE85u;
        }

        // 53-bit value = (c0 << 32 | c1) >> 11 = (c0 >> 11) * 2^32 + ((c0 & 0x7FF) << 21 | c1 >> 11)
        const __m256i top = _mm256_srli_epi32(c0, 11);
        const __m256i bottom =
            _mm256_or_si256(_mm256_slli_epi32(_mm256_and_si256(c0, mask11), 21), _mm256_srli_epi32(c1, 11));

        for (int half = 0; half < 2; ++half)
        {
            const __m128i top4 = half == 0 ? _mm256_castsi256_si128(top) : _mm256_extracti128_si256(top, 1);
            const __m128i bottom4 = half == 0 ? _mm256_castsi256_si128(bottom) : _mm256_extracti128_si256(bottom, 1);
            const __m256d bits = _mm256_add_pd(_mm256_mul_pd(u32_to_pd(top4), two32), u32_to_pd(bottom4));
            const __m256d u = _mm256_mul_pd(bits, two_m53);
            const int fired = _mm256_movemask_pd(_mm256_cmp_pd(u, threshold, _CMP_LT_OQ));
            for (int j = 0; j < 4; ++j)
                spiked[k + 4 * half + j] = static_cast<std::uint8_t>((fired >> j) & 1);
        }
    }

    if (k < n)
        poisson_draw_scalar(p, seed, first_neuron + static_cast<std::uint32_t>(k), step, spiked + k, n - k);
}

} // namespace neuroring::kernels
