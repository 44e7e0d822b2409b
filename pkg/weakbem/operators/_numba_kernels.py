"""Compiled Galerkin kernels for the Helmholtz boundary operators.

All operator kinds requested in one call share the Green's function values.
Results are written to per-slot arrays; slot index -1 disables a kind.
Each output element is accumulated by a single thread in a fixed loop order,
so results do not depend on the number of threads.
"""
import math

import numba as _numba
import numpy as np

INV_FOUR_PI = 1.0 / (4.0 * math.pi)


@_numba.njit(error_model="numpy", cache=True)
def _accumulate_point(
    x, y, w, phi, psi, normal_x, normal_y, nloc_test, nloc_trial,
    slot_v, slot_k, slot_kadj, slot_w, k, local,
):
    """Add one quadrature point to the local matrices; returns G * w for the curl term of W."""
    r0 = x[0] - y[0]
    r1 = x[1] - y[1]
    r2 = x[2] - y[2]
    d = math.sqrt(r0 * r0 + r1 * r1 + r2 * r2)
    kd = k * d
    g = complex(math.cos(kd), math.sin(kd)) * (INV_FOUR_PI / d) * w

    kk = 0j
    ka = 0j
    gm = 0j
    if slot_k >= 0 or slot_kadj >= 0:
        f = g * complex(-1.0, kd) / (d * d)
        if slot_k >= 0:
            kk = f * -(r0 * normal_y[0] + r1 * normal_y[1] + r2 * normal_y[2])
        if slot_kadj >= 0:
            ka = f * (r0 * normal_x[0] + r1 * normal_x[1] + r2 * normal_x[2])
    if slot_w >= 0:
        nn = normal_x[0] * normal_y[0] + normal_x[1] * normal_y[1] + normal_x[2] * normal_y[2]
        gm = g * (-(k * k) * nn)

    for a in range(nloc_test):
        for b in range(nloc_trial):
            prod = phi[a] * psi[b]
            if slot_v >= 0:
                local[slot_v, a, b] += g * prod
            if slot_k >= 0:
                local[slot_k, a, b] += kk * prod
            if slot_kadj >= 0:
                local[slot_kadj, a, b] += ka * prod
            if slot_w >= 0:
                local[slot_w, a, b] += gm * prod
    return g


@_numba.njit(error_model="numpy", cache=True)
def _add_curl_term(g_sum, curl_x, curl_y, slot_w, local):
    for a in range(3):
        for b in range(3):
            dot = curl_x[a, 0] * curl_y[b, 0] + curl_x[a, 1] * curl_y[b, 1] + curl_x[a, 2] * curl_y[b, 2]
            local[slot_w, a, b] += g_sum * dot


@_numba.njit(error_model="numpy", cache=True)
def _is_finite(local, n_slots, nloc_test, nloc_trial):
    for s in range(n_slots):
        for a in range(nloc_test):
            for b in range(nloc_trial):
                value = local[s, a, b]
                if not (math.isfinite(value.real) and math.isfinite(value.imag)):
                    return False
    return True


@_numba.njit(parallel=True, error_model="numpy", cache=True)
def regular_chunk(
    chunk,
    points,
    weights,
    basis_test,
    basis_trial,
    normals,
    curls,
    test_l2g,
    trial_l2g,
    n_trial_dofs,
    special_indptr,
    special_indices,
    slots,
    n_slots,
    k,
):
    """
    Tensor-rule integration of a chunk of test triangles against all non-special trial triangles.

    Returns:
        out (n_slots, len(chunk), nloc_test, n_trial_dofs): test rows with the trial scatter done
        bad (len(chunk),): first trial triangle with a non-finite contribution, or -1
    """
    nc = chunk.shape[0]
    nt = points.shape[0]
    nq = weights.shape[1]
    nloc_test = test_l2g.shape[1]
    nloc_trial = trial_l2g.shape[1]
    slot_v = slots[0]
    slot_k = slots[1]
    slot_kadj = slots[2]
    slot_w = slots[3]

    out = np.zeros((n_slots, nc, nloc_test, n_trial_dofs), dtype=np.complex128)
    bad = np.full(nc, -1, dtype=np.int64)

    for c in _numba.prange(nc):
        tau = chunk[c]
        local = np.zeros((n_slots, 3, 3), dtype=np.complex128)
        next_special = special_indptr[tau]
        stop_special = special_indptr[tau + 1]
        for sigma in range(nt):
            if next_special < stop_special and special_indices[next_special] == sigma:
                next_special += 1
                continue
            local[:] = 0.0
            g_sum = 0j
            for qx in range(nq):
                for qy in range(nq):
                    g_sum += _accumulate_point(
                        points[tau, qx], points[sigma, qy], weights[tau, qx] * weights[sigma, qy],
                        basis_test[qx], basis_trial[qy], normals[tau], normals[sigma],
                        nloc_test, nloc_trial, slot_v, slot_k, slot_kadj, slot_w, k, local,
                    )
            if slot_w >= 0:
                _add_curl_term(g_sum, curls[tau], curls[sigma], slot_w, local)
            if bad[c] < 0 and not _is_finite(local, n_slots, nloc_test, nloc_trial):
                bad[c] = sigma
            for s in range(n_slots):
                for a in range(nloc_test):
                    for b in range(nloc_trial):
                        out[s, c, a, trial_l2g[sigma, b]] += local[s, a, b]
    return out, bad


@_numba.njit(parallel=True, error_model="numpy", cache=True)
def pair_batch(
    tri_x,
    tri_y,
    perm_x,
    perm_y,
    swap,
    ref_points,
    ref_weights,
    vertices,
    triangles,
    normals,
    areas,
    curls,
    nloc_test,
    nloc_trial,
    slots,
    n_slots,
    k,
):
    """
    Integrate a batch of triangle pairs with one pair rule.

    Reference vertex j of the x triangle is its local vertex perm_x[p, j] (same for y).
    When swap[p] is set, x takes the second triangle slot of the rule and y the first.

    Returns:
        out (n_pairs, n_slots, 3, 3) local matrices indexed by original local basis numbers
    """
    n_pairs = tri_x.shape[0]
    nr = ref_weights.shape[0]
    slot_v = slots[0]
    slot_k = slots[1]
    slot_kadj = slots[2]
    slot_w = slots[3]
    out = np.zeros((n_pairs, n_slots, 3, 3), dtype=np.complex128)

    for p in _numba.prange(n_pairs):
        tau = tri_x[p]
        sigma = tri_y[p]
        jacobian = (2.0 * areas[tau]) * (2.0 * areas[sigma])
        bx = np.empty(3)
        by = np.empty(3)
        phi = np.ones(3)
        psi = np.ones(3)
        x = np.empty(3)
        y = np.empty(3)
        local = out[p]
        g_sum = 0j
        for r in range(nr):
            if swap[p]:
                sx = ref_points[r, 2]
                tx = ref_points[r, 3]
                sy = ref_points[r, 0]
                ty = ref_points[r, 1]
            else:
                sx = ref_points[r, 0]
                tx = ref_points[r, 1]
                sy = ref_points[r, 2]
                ty = ref_points[r, 3]
            bx[perm_x[p, 0]] = 1.0 - sx - tx
            bx[perm_x[p, 1]] = sx
            bx[perm_x[p, 2]] = tx
            by[perm_y[p, 0]] = 1.0 - sy - ty
            by[perm_y[p, 1]] = sy
            by[perm_y[p, 2]] = ty
            for d in range(3):
                x[d] = (
                    bx[0] * vertices[triangles[tau, 0], d]
                    + bx[1] * vertices[triangles[tau, 1], d]
                    + bx[2] * vertices[triangles[tau, 2], d]
                )
                y[d] = (
                    by[0] * vertices[triangles[sigma, 0], d]
                    + by[1] * vertices[triangles[sigma, 1], d]
                    + by[2] * vertices[triangles[sigma, 2], d]
                )
            if nloc_test == 3:
                for m in range(3):
                    phi[m] = bx[m]
            if nloc_trial == 3:
                for m in range(3):
                    psi[m] = by[m]
            g_sum += _accumulate_point(
                x, y, ref_weights[r] * jacobian, phi, psi, normals[tau], normals[sigma],
                nloc_test, nloc_trial, slot_v, slot_k, slot_kadj, slot_w, k, local,
            )
        if slot_w >= 0:
            _add_curl_term(g_sum, curls[tau], curls[sigma], slot_w, local)
    return out
