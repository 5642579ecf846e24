"""Pure-Python/numpy kernels.

Reference implementations of the hot inner loops.  The compiled module
``_speed`` mirrors these signatures; both backends perform the updates in
the same order so results agree to the last bit.
"""

import numpy as np


def g1_flow(g0, a_seq, escape, g_out, gt_out, A_out):
    """Iterate g -> g - a_n g^2, recording the closed-form approximant.

    ``g_out``, ``gt_out``, ``A_out`` must be preallocated complex arrays
    of length ``len(a_seq)+1``.  Returns ``(status, min_denom)`` where
    ``status`` is -1 on completion or the step index at which ``|g|``
    crossed ``escape`` (ignored when ``escape <= 0``), and ``min_denom``
    is the smallest ``|1 + g0*sum a_k|`` met along the way.
    """
    n = len(a_seq)
    g = complex(g0)
    suma = 0.0 + 0.0j
    g_out[0] = g
    gt_out[0] = g
    A_out[0] = 0.0
    min_denom = np.inf
    status = -1
    for i in range(n):
        an = complex(a_seq[i])
        g = g - an * g * g
        suma = suma + an
        denom = 1.0 + g0 * suma
        ad = abs(denom)
        if ad < min_denom:
            min_denom = ad
        g_out[i + 1] = g
        gt_out[i + 1] = g0 / denom if ad > 0.0 else 0.0
        A_out[i + 1] = suma / (i + 1.0)
        if escape > 0.0 and abs(g) > escape:
            status = i + 1
            break
    return status, min_denom


def hubbard_flow(g1_0, g2_0, a_seq, half_a, escape, g1_out, g2_out):
    """Truncated two-coupling flow: g1 -> g1 - a_j g1^2, g2 -> g2 - (a/2) g1^2.

    ``a_seq`` feeds the g1 line (schedule perturbations live there); the g2
    line always uses the constant ``half_a``.  Output arrays have length
    ``len(a_seq)+1``.  Returns -1 or the escape step.
    """
    n = len(a_seq)
    g1 = g1_0
    g2 = g2_0
    g1_out[0] = g1
    g2_out[0] = g2
    for i in range(n):
        sq = g1 * g1
        g2 = g2 - half_a * sq
        g1 = g1 - a_seq[i] * sq
        g1_out[i + 1] = g1
        g2_out[i + 1] = g2
        if escape > 0.0 and abs(g1) > escape:
            return i + 1
    return -1


def ensemble_chunk(g, suma, g0, sigma, a, margins):
    """Advance a batch of quadratic-map flows by ``sigma.shape[0]`` steps.

    ``g``, ``suma``, ``g0`` are complex state vectors of length B; ``sigma``
    is an (m, B) block of schedule perturbations.  ``margins`` is a (5, B)
    float array updated in place with running maxima of

        0: |g - g_tilde| - |g_tilde|^{3/2}
        1: |g|
        2: |Arg g|
        3: |g_tilde|
        4: |Arg g_tilde|
    """
    m = sigma.shape[0]
    for i in range(m):
        an = a + sigma[i]
        g -= an * g * g
        suma += an
        gt = g0 / (1.0 + g0 * suma)
        mt = np.abs(gt)
        dev = np.abs(g - gt) - mt * np.sqrt(mt)
        np.maximum(margins[0], dev, out=margins[0])
        np.maximum(margins[1], np.abs(g), out=margins[1])
        np.maximum(margins[2], np.abs(np.angle(g)), out=margins[2])
        np.maximum(margins[3], mt, out=margins[3])
        np.maximum(margins[4], np.abs(np.angle(gt)), out=margins[4])
