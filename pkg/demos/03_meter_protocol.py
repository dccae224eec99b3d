"""Reading weak values from a meter qubit.

The observable is coupled weakly to a meter qubit.  After postselection, the
meter's <X> and <Y> give the real and imaginary parts of the weak value.  The
readout error shrinks as the coupling g does.
"""
# %%
import numpy as np

from cheshire_mzi import observable
from cheshire_mzi.optics import postselector, prepare_delayed
from cheshire_mzi.weak import closed_form_delayed, estimate_weak_value_meter, sample_weak_value

theta, phi = 1.1, 0.4
pre, post = prepare_delayed(theta, phi), postselector("delayed")
exact = closed_form_delayed("zR", theta, phi)
print("analytic zR:", np.round(exact, 6))

# %%
# Exact meter readout: the bias goes down by about a factor of 100 per decade
# of g, so the leading correction is quadratic in the coupling.
previous = None
for g in (1e-1, 1e-2, 1e-3, 1e-4):
    err = abs(estimate_weak_value_meter(observable("zR"), pre, post, g=g).value - exact)
    ratio = "" if previous is None else f"  ratio {previous / err:.1f}"
    print(f"g={g:.0e}  |error|={err:.2e}{ratio}")
    previous = err

# %%
# Shot sampling: Bernoulli postselection followed by binary meter outcomes.
# The statistical error scales like 1/(g sqrt(shots * prob)), which is why
# weak measurements need so many photons.
for shots in (10**4, 10**5, 10**6):
    wv = sample_weak_value(observable("zR"), pre, post, g=1e-2, shots=shots, seed=1)
    print(f"shots={shots:>7}: estimate {wv.value:.3f} +/- {wv.stderr:.3f}")
