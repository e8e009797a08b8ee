"""Central-difference verification of analytic gradients."""

import numpy as np


def finite_difference_check(loss_fn, arrays, analytic_grads, epsilon=1e-5,
                            max_entries=None, rng=None):
    """Worst relative error between analytic and numeric gradients.

    loss_fn() recomputes the scalar loss from the current contents of
    `arrays`, which are perturbed in place one coordinate at a time
    (central differences, +/- epsilon). analytic_grads matches arrays
    entry for entry and must already hold the gradients under test.

    Every coordinate is checked unless max_entries caps the count per
    array, in which case a deterministic subset is drawn from rng.
    The relative error divides by max(|analytic|, |numeric|, 1e-3) so tiny
    gradients are compared near-absolutely.
    """
    if not 1e-7 <= epsilon <= 1e-3:
        raise ValueError("epsilon must lie in [1e-7, 1e-3]")
    worst = 0.0
    for arr, grad in zip(arrays, analytic_grads):
        flat = arr.reshape(-1)
        gflat = np.asarray(grad).reshape(-1)
        if max_entries is not None and flat.size > max_entries:
            if rng is None:
                rng = np.random.default_rng(0)
            idx = np.sort(rng.choice(flat.size, size=max_entries, replace=False))
        else:
            idx = range(flat.size)
        for i in idx:
            orig = flat[i]
            flat[i] = orig + epsilon
            up = loss_fn()
            flat[i] = orig - epsilon
            down = loss_fn()
            flat[i] = orig
            numeric = (up - down) / (2.0 * epsilon)
            err = abs(numeric - gflat[i]) / max(abs(numeric), abs(gflat[i]), 1e-3)
            if err > worst:
                worst = err
    return worst
