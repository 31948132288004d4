"""Shared independent oracles and validators for the test suite."""

import numpy as np
from numpy.polynomial.legendre import leggauss

from bayesmc import Alphabet, LabeledHMM


def quad_evidence_binary(counts, alpha=1.0, nodes=40):
    """Evidence by brute-force quadrature of likelihood x prior over the
    product of binary simplices, one per conditioning word.

    Each word's 1-simplex is parametrized by x = p(1|word); the flat prior
    (alpha=1) has density 1 and general alpha a Beta(alpha, alpha) density.
    Gauss-Legendre with `nodes` points is exact for the polynomial
    integrands that small integer counts produce.  No Gamma-function
    identities are used.
    """
    x, w = leggauss(nodes)
    x = 0.5 * (x + 1.0)
    w = 0.5 * w
    total = 1.0
    for n0, n1 in counts.table[:, [0, 1]]:
        f = x ** (n1 + alpha - 1.0) * (1.0 - x) ** (n0 + alpha - 1.0)
        norm = np.sum(w * x ** (alpha - 1.0) * (1.0 - x) ** (alpha - 1.0))
        total *= np.sum(w * f) / norm
    return total


def quad_evidence_binary_k1_tensor(counts, nodes=24):
    """Same evidence for binary k=1, alpha=1, but as a genuine 2-D tensor
    quadrature over [0,1]^2 without factorizing the integrand."""
    assert counts.order == 1 and counts.alphabet.size == 2
    x, w = leggauss(nodes)
    x = 0.5 * (x + 1.0)
    w = 0.5 * w
    n = counts.table
    x0, x1 = np.meshgrid(x, x, indexing="ij")
    integrand = (
        x0 ** n[0, 1] * (1.0 - x0) ** n[0, 0]
        * x1 ** n[1, 1] * (1.0 - x1) ** n[1, 0]
    )
    return float(w @ integrand @ w)


def window_count_oracle(symbols, k, alphabet_size=2):
    """Count length-(k+1) windows by explicit enumeration into a dict."""
    out = {}
    for i in range(len(symbols) - k):
        window = tuple(symbols[i : i + k + 1])
        out[window] = out.get(window, 0) + 1
    return out


def even_runs_ok(text):
    """True when every maximal 1-run bounded by 0s on both sides has even
    length.  Leading/trailing runs are unconstrained (truncated blocks)."""
    runs = text.split("0")
    return all(len(run) % 2 == 0 for run in runs[1:-1])


def biased_chain(p10=0.7, p11=0.4):
    """Full-support order-1 binary chain as a labeled process; the hidden
    state is simply the last emitted symbol."""
    t0 = [[1.0 - p10, 0.0], [1.0 - p11, 0.0]]
    t1 = [[0.0, p10], [0.0, p11]]
    return LabeledHMM(Alphabet.binary(), np.array([t0, t1]), name="biased")


def random_tables(rng, n_tables, max_k=2, max_count=20, alphabets=(2, 3)):
    """Random (CountTable, HyperTable) pairs for identity checks."""
    from bayesmc import Alphabet, CountTable, HyperTable

    out = []
    for _ in range(n_tables):
        A = int(rng.choice(alphabets))
        k = int(rng.integers(1, max_k + 1))
        alphabet = Alphabet(tuple("0123456789"[:A]))
        shape = (A**k, A)
        counts = CountTable(k, alphabet, rng.integers(0, max_count + 1, size=shape).astype(float))
        hyper = HyperTable(k, alphabet, rng.uniform(0.2, 3.0, size=shape))
        out.append((counts, hyper))
    return out
