# Gaussian conditional independence: gaussoids, witnesses, entropy, the five-cycle.
import numpy as np

from algstat.gaussian_ci import (
    entropy_vector,
    enumerate_gaussoids,
    find_representation,
    gaussoid_of,
    random_pd,
    submodular_check,
    tight_faces,
)
from algstat.gaussian_ci.fivecycle import five_cycle_experiment

g3 = enumerate_gaussoids(3)
print("gaussoids on 3 elements:", len(g3))
for G in g3:
    res = find_representation(G, budget=20)
    print(f"  {str(G.to_json()['statements']):45s} witness found: {res.found}")

rng = np.random.default_rng(4)
S = random_pd(4, rng, zero_prob=0.5)
print("random PD matrix:", S.matrix())
print("vanishing minors:", gaussoid_of(S).to_json()["statements"])
print("tight faces agree:", tight_faces(S) == gaussoid_of(S))
print("submodular report:", submodular_check(entropy_vector(S)).to_json())

rep = five_cycle_experiment(n_samples=200)
print("five-cycle:", {k: rep[k] for k in ("symbolic_ok", "numeric", "inequalities", "ok")})
