# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels; see _ref.py for the reference semantics."""

from libc.math cimport sqrt, fabs, atan2

ctypedef double complex cplx

ctypedef fused real_or_cplx:
    double
    cplx


cdef inline double _cabs(cplx z) noexcept nogil:
    return sqrt(z.real * z.real + z.imag * z.imag)


def g1_flow(cplx g0, cplx[::1] a_seq, double escape,
            cplx[::1] g_out, cplx[::1] gt_out, cplx[::1] A_out):
    cdef Py_ssize_t n = a_seq.shape[0]
    cdef Py_ssize_t i
    cdef cplx g = g0, suma = 0.0, an, denom
    cdef double ad, min_denom = 1e308
    cdef int status = -1
    g_out[0] = g
    gt_out[0] = g
    A_out[0] = 0.0
    for i in range(n):
        an = a_seq[i]
        g = g - an * g * g
        suma = suma + an
        denom = 1.0 + g0 * suma
        ad = _cabs(denom)
        if ad < min_denom:
            min_denom = ad
        g_out[i + 1] = g
        gt_out[i + 1] = g0 / denom if ad > 0.0 else 0.0
        A_out[i + 1] = suma / <double>(i + 1)
        if escape > 0.0 and _cabs(g) > escape:
            status = <int>(i + 1)
            break
    return status, min_denom


def hubbard_flow(real_or_cplx g1_0, real_or_cplx g2_0, real_or_cplx[::1] a_seq,
                 real_or_cplx half_a, double escape,
                 real_or_cplx[::1] g1_out, real_or_cplx[::1] g2_out):
    cdef Py_ssize_t n = a_seq.shape[0]
    cdef Py_ssize_t i
    cdef real_or_cplx g1 = g1_0, g2 = g2_0, sq
    cdef double m
    g1_out[0] = g1
    g2_out[0] = g2
    for i in range(n):
        sq = g1 * g1
        g2 = g2 - half_a * sq
        g1 = g1 - a_seq[i] * sq
        g1_out[i + 1] = g1
        g2_out[i + 1] = g2
        if escape > 0.0:
            if real_or_cplx is double:
                m = fabs(g1)
            else:
                m = _cabs(g1)
            if m > escape:
                return <int>(i + 1)
    return -1


def ensemble_chunk(cplx[::1] g, cplx[::1] suma, cplx[::1] g0,
                   cplx[:, ::1] sigma, double a, double[:, ::1] margins):
    cdef Py_ssize_t m = sigma.shape[0]
    cdef Py_ssize_t B = sigma.shape[1]
    cdef Py_ssize_t i, b
    cdef cplx an, gb, sb, gt
    cdef double dev, mt, mg, ag
    with nogil:
        for i in range(m):
            for b in range(B):
                an = a + sigma[i, b]
                gb = g[b]
                gb = gb - an * gb * gb
                g[b] = gb
                sb = suma[b] + an
                suma[b] = sb
                gt = g0[b] / (1.0 + g0[b] * sb)
                mt = _cabs(gt)
                dev = _cabs(gb - gt) - mt * sqrt(mt)
                if dev > margins[0, b]:
                    margins[0, b] = dev
                mg = _cabs(gb)
                if mg > margins[1, b]:
                    margins[1, b] = mg
                ag = fabs(atan2(gb.imag, gb.real))
                if ag > margins[2, b]:
                    margins[2, b] = ag
                if mt > margins[3, b]:
                    margins[3, b] = mt
                ag = fabs(atan2(gt.imag, gt.real))
                if ag > margins[4, b]:
                    margins[4, b] = ag
