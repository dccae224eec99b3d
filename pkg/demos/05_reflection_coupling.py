"""A meter coupling built from a conditional reflection.

Instead of exp(-i g A Y), the meter can be reflected through a slightly tilted
axis only when the photon is in one arm.  The first-order reading is then a
ratio of two transition amplitudes rather than a textbook weak value.
"""
# %%
from cheshire_mzi import observable
from cheshire_mzi.optics import postselector, prepare_delayed
from cheshire_mzi.weak import Flavor, estimate_weak_value_meter, reflection_coupling_target

pre, post = prepare_delayed(0.7, 0.3), postselector("delayed")
for tag in ("xL", "zR"):
    target = reflection_coupling_target(observable(tag), pre, post)
    for g in (1e-2, 1e-3):
        est = estimate_weak_value_meter(observable(tag), pre, post, g=g, flavor=Flavor.REFLECTION).value
        print(f"{tag} g={g:.0e}: estimate {est:.4f}  target {target:.4f}")
