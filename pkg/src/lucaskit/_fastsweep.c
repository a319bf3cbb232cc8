/* C twin of _sweeps.py: incremental psi-column sweeps over GMP integers.
 *
 * Exposes general_values(k, m_max) and block_values(k, b_max) returning
 * Python ints in the exact order the pure-Python backend produces them.
 * The algebra is identical; only the arithmetic engine differs.  Any
 * integrality failure (a dyadic tail that does not cancel) raises
 * ValueError, which the caller maps onto the package's IntegralityError.
 */

#define PY_SSIZE_T_CLEAN
#include <Python.h>
#include <gmp.h>
#include <stdlib.h>
#include <string.h>

/* ------------------------------------------------------------------ */

static PyObject *
mpz_to_pylong(const mpz_t v)
{
    char *s = mpz_get_str(NULL, 16, v);
    if (s == NULL)
        return PyErr_NoMemory();
    PyObject *res = PyLong_FromString(s, NULL, 16);
    void (*freefunc)(void *, size_t);
    mp_get_memory_functions(NULL, NULL, &freefunc);
    freefunc(s, strlen(s) + 1);
    return res;
}

/* fold scratch[0..n) as sum of scratch[t] << ((n-1-t)*step), result in
 * scratch[0]; scratch must have room for the next power of two >= n and
 * entries beyond n are assumed initialized (they are overwritten only
 * after being read as pad zeros placed by the caller). */
static void
fold_tree(mpz_t *scratch, long n, long step, mpz_t tmp)
{
    long size = 1;
    while (size < n)
        size <<= 1;
    /* shift the n leaves to the back, zero-pad the front */
    if (size != n) {
        long lead = size - n;
        for (long t = n - 1; t >= 0; t--)
            mpz_swap(scratch[t + lead], scratch[t]);
        for (long t = 0; t < lead; t++)
            mpz_set_ui(scratch[t], 0);
    }
    unsigned long s = (unsigned long)step;
    while (size > 1) {
        for (long j = 0; j < size / 2; j++) {
            mpz_mul_2exp(tmp, scratch[2 * j], s);
            mpz_add(scratch[j], tmp, scratch[2 * j + 1]);
        }
        size /= 2;
        s <<= 1;
    }
}

/* psi(y, z) for 0 <= z: C(y, z) + C(y+1, z+1) */
static void
psi_seed(mpz_t out, mpz_t tmp, unsigned long y, unsigned long z)
{
    mpz_bin_uiui(out, y, z);
    mpz_bin_uiui(tmp, y + 1, z + 1);
    mpz_add(out, out, tmp);
}

/* shift-and-sign epilogue shared by both sweeps; returns 0 on integrality
 * failure (exception already set) */
static int
finish_row(mpz_t n, long sh, int negate, PyObject *list, Py_ssize_t pos,
           const char *what, long k, long a1, long a2, long a3)
{
    if (sh <= 0) {
        mpz_mul_2exp(n, n, (unsigned long)(-sh));
    } else {
        int exact = (mpz_sgn(n) == 0) ||
                    (mpz_scan1(n, 0) >= (mp_bitcnt_t)sh);
        if (!exact) {
            PyErr_Format(PyExc_ValueError,
                         "%s sweep k=%ld %ld/%ld/%ld: dyadic tail failed to cancel",
                         what, k, a1, a2, a3);
            return 0;
        }
        mpz_tdiv_q_2exp(n, n, (unsigned long)sh);
    }
    if (negate)
        mpz_neg(n, n);
    PyObject *obj = mpz_to_pylong(n);
    if (obj == NULL)
        return 0;
    PyList_SET_ITEM(list, pos, obj);
    return 1;
}

/* ------------------------------------------------------------------ */

static PyObject *
general_values(PyObject *self, PyObject *args)
{
    long k, m_max;
    if (!PyArg_ParseTuple(args, "ll", &k, &m_max))
        return NULL;
    long m_lo = (k == 2) ? 1 : k - 2;
    if (k < 2 || m_max < m_lo) {
        PyErr_SetString(PyExc_ValueError, "need k >= 2 and m_max >= m_lo");
        return NULL;
    }
    long kp1 = k + 1;
    int odd_k = (int)(k & 1);
    long g_cap = (m_max + 1) / kp1 + 2;     /* column groups ever activated */
    long cells = g_cap * kp1;
    long tree_cap = 2;
    while (tree_cap < g_cap + 1)
        tree_cap <<= 1;

    mpz_t *col = NULL, *tree = NULL;
    char *set = NULL;
    PyObject *list = NULL;
    mpz_t tmp;
    mpz_init(tmp);
    col = (mpz_t *)malloc((size_t)cells * sizeof(mpz_t));
    tree = (mpz_t *)malloc((size_t)tree_cap * sizeof(mpz_t));
    set = (char *)calloc((size_t)cells, 1);
    if (!col || !tree || !set) {
        PyErr_NoMemory();
        goto fail_early;
    }
    for (long t = 0; t < cells; t++)
        mpz_init(col[t]);
    for (long t = 0; t < tree_cap; t++)
        mpz_init(tree[t]);

    list = PyList_New((m_max - m_lo + 1) * k);
    if (list == NULL)
        goto fail;

    long groups = 0;
    Py_ssize_t pos = 0;
    for (long m = m_lo; m <= m_max; m++) {
        long y0 = m - groups - 1;
        long zb_new = groups * k - 2;
        if (y0 >= zb_new && groups < g_cap) {   /* activate group `groups` */
            mpz_t *c0 = col + groups * kp1;
            char *s0 = set + groups * kp1;
            for (long c = 0; c < kp1; c++) {
                long z = zb_new + c;
                if (0 <= z && z < y0) {
                    psi_seed(c0[c], tmp, (unsigned long)(y0 - 1),
                             (unsigned long)z);
                    s0[c] = 1;
                }
            }
            groups++;
        }
        for (long i = 0; i < groups; i++) {
            long y = m - i - 1;
            long zb = i * k - 2;
            mpz_t *ci = col + i * kp1;
            char *si = set + i * kp1;
            for (long c = 0; c < kp1; c++) {
                long z = zb + c;
                if (z < 0)
                    continue;
                long d = y - z;
                if (d > 0) {
                    mpz_mul_ui(ci[c], ci[c],
                               (unsigned long)y * (unsigned long)(y + z + 2));
                    mpz_divexact_ui(ci[c], ci[c],
                                    (unsigned long)d * (unsigned long)(y + z + 1));
                } else if (d == 0) {
                    mpz_set_ui(ci[c], 2);   /* psi(z, z) */
                    si[c] = 1;
                }
            }
        }
        for (long r = -1; r <= k - 2; r++) {
            long nterm = 0;
            for (long i = 0; i < groups; i++) {
                long y = m - i - 1;
                long z1 = i * k + r - 1;
                long c1 = r + 1;
                mpz_t *ci = col + i * kp1;
                char *si = set + i * kp1;
                int have_a = 0, a_const1 = 0;
                if (z1 == -1) {
                    have_a = 1;
                    a_const1 = 1;
                } else if (0 <= z1 && z1 <= y && si[c1]) {
                    have_a = 1;
                }
                long z2 = z1 + 1;
                int have_b = 0, b_const1 = 0;
                if (z2 == -1) {
                    have_b = 1;
                    b_const1 = 1;
                } else if (0 <= z2 && z2 <= y && si[c1 + 1]) {
                    have_b = 1;
                }
                if (!have_a && !have_b)
                    break;
                mpz_ptr x = tree[nterm];
                if (!have_a) {
                    if (b_const1)
                        mpz_set_ui(x, 1);
                    else
                        mpz_set(x, ci[c1 + 1]);
                } else {
                    if (a_const1)
                        mpz_set_ui(tmp, 4);
                    else
                        mpz_mul_2exp(tmp, ci[c1], 2);
                    if (!have_b)
                        mpz_set(x, tmp);
                    else if (b_const1)
                        mpz_add_ui(x, tmp, 1);
                    else
                        mpz_add(x, tmp, ci[c1 + 1]);
                }
                if (odd_k && ((i + r) & 1))
                    mpz_neg(x, x);
                nterm++;
            }
            fold_tree(tree, nterm, kp1, tmp);
            long sh = 2 - (m - (nterm - 1) * kp1 - r);
            int negate = (!odd_k) && (r & 1);
            if (!finish_row(tree[0], sh, negate, list, pos, "general",
                            k, m, r, 0))
                goto fail;
            pos++;
        }
    }

    for (long t = 0; t < cells; t++)
        mpz_clear(col[t]);
    for (long t = 0; t < tree_cap; t++)
        mpz_clear(tree[t]);
    free(col); free(tree); free(set);
    mpz_clear(tmp);
    return list;

fail:
    for (long t = 0; t < cells; t++)
        mpz_clear(col[t]);
    for (long t = 0; t < tree_cap; t++)
        mpz_clear(tree[t]);
fail_early:
    free(col); free(tree); free(set);
    mpz_clear(tmp);
    Py_XDECREF(list);
    return NULL;
}

/* ------------------------------------------------------------------ */

static PyObject *
block_values(PyObject *self, PyObject *args)
{
    long k, b_max;
    if (!PyArg_ParseTuple(args, "ll", &k, &b_max))
        return NULL;
    if (k <= 2 || b_max < 1) {
        PyErr_SetString(PyExc_ValueError, "need k > 2 and b_max >= 1");
        return NULL;
    }
    long km1 = k - 1;
    long kp1 = k + 1;
    int odd_k = (int)(k & 1);
    long i_cap = b_max + 1;                 /* columns per j: i in [0, b] */
    long cells = km1 * i_cap * k;
    long tree_cap = 2;
    while (tree_cap < i_cap + 1)
        tree_cap <<= 1;

    mpz_t *col = NULL, *tree = NULL;
    char *set = NULL;
    PyObject *list = NULL;
    mpz_t tmp, num, den;
    mpz_init(tmp); mpz_init(num); mpz_init(den);
    col = (mpz_t *)malloc((size_t)cells * sizeof(mpz_t));
    tree = (mpz_t *)malloc((size_t)tree_cap * sizeof(mpz_t));
    set = (char *)calloc((size_t)cells, 1);
    if (!col || !tree || !set) {
        PyErr_NoMemory();
        goto fail_early;
    }
    for (long t = 0; t < cells; t++)
        mpz_init(col[t]);
    for (long t = 0; t < tree_cap; t++)
        mpz_init(tree[t]);

    list = PyList_New(b_max * km1 * km1);
    if (list == NULL)
        goto fail;

    Py_ssize_t pos = 0;
    for (long b = 1; b <= b_max; b++) {
        for (long j = 0; j < km1; j++) {
            for (long i = 0; i <= b; i++) {
                long y = b * km1 + j - i - 2;
                long y_prev = y - km1;
                long zb = i * k - 2;
                mpz_t *ci = col + (j * i_cap + i) * k;
                char *si = set + (j * i_cap + i) * k;
                for (long c = 0; c < k; c++) {
                    long z = zb + c;
                    if (z < 0 || z > y)
                        continue;
                    if (!si[c] || z > y_prev) {
                        psi_seed(ci[c], tmp, (unsigned long)y,
                                 (unsigned long)z);
                        si[c] = 1;
                    } else {
                        mpz_set_ui(num, (unsigned long)(y + z + 2));
                        mpz_set_ui(den, (unsigned long)(y_prev + z + 2));
                        for (long t = y_prev + 1; t <= y; t++) {
                            mpz_mul_ui(num, num, (unsigned long)t);
                            mpz_mul_ui(den, den, (unsigned long)(t - z));
                        }
                        mpz_mul(ci[c], ci[c], num);
                        mpz_divexact(ci[c], ci[c], den);
                    }
                }
            }
            for (long r = 0; r < km1; r++) {
                long nterm = 0;
                for (long i = 0; i <= b; i++) {
                    long y = b * km1 + j - i - 2;
                    long z1 = i * k + r - 2;
                    mpz_t *ci = col + (j * i_cap + i) * k;
                    char *si = set + (j * i_cap + i) * k;
                    int have_a = 0, a_const1 = 0;
                    if (z1 < 0) {
                        if (z1 == -1) { have_a = 1; a_const1 = 1; }
                    } else if (z1 <= y && si[r]) {
                        have_a = 1;
                    }
                    long z2 = z1 + 1;
                    int have_b = 0, b_const1 = 0;
                    if (z2 < 0) {
                        if (z2 == -1) { have_b = 1; b_const1 = 1; }
                    } else if (z2 <= y && si[r + 1]) {
                        have_b = 1;
                    }
                    if (!have_a && !have_b)
                        break;
                    mpz_ptr x = tree[nterm];
                    if (!have_a) {
                        if (b_const1)
                            mpz_set_ui(x, 1);
                        else
                            mpz_set(x, ci[r + 1]);
                    } else {
                        if (a_const1)
                            mpz_set_ui(tmp, 4);
                        else
                            mpz_mul_2exp(tmp, ci[r], 2);
                        if (!have_b)
                            mpz_set(x, tmp);
                        else if (b_const1)
                            mpz_add_ui(x, tmp, 1);
                        else
                            mpz_add(x, tmp, ci[r + 1]);
                    }
                    if (odd_k && ((i + r + 1) & 1))
                        mpz_neg(x, x);
                    nterm++;
                }
                fold_tree(tree, nterm, kp1, tmp);
                long e_last = b * k + j - r - b - (nterm - 1) * kp1;
                long sh = 2 - e_last;
                int negate = (!odd_k) && ((r + 1) & 1);
                if (!finish_row(tree[0], sh, negate, list, pos, "block",
                                k, b, j, r))
                    goto fail;
                pos++;
            }
        }
    }

    for (long t = 0; t < cells; t++)
        mpz_clear(col[t]);
    for (long t = 0; t < tree_cap; t++)
        mpz_clear(tree[t]);
    free(col); free(tree); free(set);
    mpz_clear(tmp); mpz_clear(num); mpz_clear(den);
    return list;

fail:
    for (long t = 0; t < cells; t++)
        mpz_clear(col[t]);
    for (long t = 0; t < tree_cap; t++)
        mpz_clear(tree[t]);
fail_early:
    free(col); free(tree); free(set);
    mpz_clear(tmp); mpz_clear(num); mpz_clear(den);
    Py_XDECREF(list);
    return NULL;
}

/* ------------------------------------------------------------------ */

static PyMethodDef fastsweep_methods[] = {
    {"general_values", general_values, METH_VARARGS,
     "general_values(k, m_max) -> list of closed-form companion values,\n"
     "m-major, r in [-1, k-2] minor, starting at the regime's lowest m."},
    {"block_values", block_values, METH_VARARGS,
     "block_values(k, b_max) -> list of block closed-form values,\n"
     "b-major, then j, then r, each in [0, k-2]."},
    {NULL, NULL, 0, NULL}
};

static struct PyModuleDef fastsweep_module = {
    PyModuleDef_HEAD_INIT,
    "lucaskit._fastsweep",
    "GMP-backed column sweeps (C twin of lucaskit._sweeps).",
    -1,
    fastsweep_methods
};

PyMODINIT_FUNC
PyInit__fastsweep(void)
{
    return PyModule_Create(&fastsweep_module);
}
