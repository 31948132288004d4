"""Compare candidate Markov orders on two contrasting sources.

The golden-mean source really is an order-1 chain, so its evidence quickly
concentrates on k = 1.  The even process (1-blocks of even length) is not
Markov at any finite order; its evidence keeps drifting to higher k as more
data resolves longer correlations, preferring even k over odd.
"""

from bayesmc import (
    average_counts,
    compare_penalized,
    compare_uniform,
    even_process,
    golden_mean,
    log_evidence,
    map_order,
    uniform_hyper,
)

ORDERS = range(1, 5)


def order_posterior(source, N, penalized=False):
    evidences = {
        k: log_evidence(average_counts(source, N, k),
                        uniform_hyper(k, source.alphabet, 1.0))
        for k in ORDERS
    }
    if penalized:
        return compare_penalized(evidences, source.alphabet.size)
    return compare_uniform(evidences)


for source in (golden_mean(), even_process()):
    print(f"=== {source.name} ===")
    header = "  ".join(f"P(k={k})" for k in ORDERS)
    print(f"{'N':>7}  {header}  chosen")
    for N in (200, 1_000, 5_000, 20_000):
        op = order_posterior(source, N)
        probs = "  ".join(f"{op.probability(k):6.3f}" for k in ORDERS)
        print(f"{N:>7}  {probs}  k = {map_order(op)}")
    print()

print("""With the parameter-count penalty prior, small data sets default to
the simplest order until the evidence clearly pays for more parameters:""")
for N in (100, 1_000, 10_000):
    op = order_posterior(even_process(), N, penalized=True)
    print(f"  even process, N = {N:>6}: chosen k = {map_order(op)}")
