"""Infer the transition probabilities of an order-1 binary chain.

We take the golden-mean source (the binary chain that never emits "00"),
generate exact average count tables at a few data sizes, and watch the
posterior sharpen around the true parameters p(1|0) = 1 and
p(0|1) = p(1|1) = 1/2.
"""

from bayesmc import (
    average_counts,
    confidence_region,
    golden_mean,
    marginal,
    posterior,
    posterior_mean,
    uniform_hyper,
)

source = golden_mean()
prior = uniform_hyper(order := 1, source.alphabet, 1.0)

print(f"source: {source.name}   prior: flat Dirichlet (alpha = 1)\n")
print(f"{'N':>7}  {'E[p(1|0)]':>10}  {'E[p(0|1)]':>10}  95% region for p(0|1)")
for N in (100, 1_000, 10_000, 100_000):
    post = posterior(average_counts(source, N, order), prior)
    mean = posterior_mean(post)
    region = confidence_region(marginal(post, word=1, symbol=0), 0.95)
    print(f"{N:>7}  {mean[0, 1]:>10.5f}  {mean[1, 0]:>10.5f}  "
          f"[{region.lower:.4f}, {region.upper:.4f}]")

print("""
Notes:
 - p(1|0) climbs toward 1 but never reaches it at finite N: the flat prior
   keeps one pseudo-count on the transition the source forbids.
 - The confidence region around p(0|1) = 1/2 shrinks like 1/sqrt(N).
""")
