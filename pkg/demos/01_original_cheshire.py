"""The Cheshire Cat in a Mach-Zehnder interferometer.

A horizontally polarized photon enters a balanced interferometer and is
postselected on an entangled path-polarization state.  Weak values then put
the photon in the left arm and its circular polarization in the right arm.
"""
# %%
# The pre- and postselected pair is built from optical elements: a beam
# splitter acting on the input port, followed by a fixed phase that makes the
# two arms carry i|L> + |R>.
from cheshire_mzi import observable, weak_value_analytic
from cheshire_mzi.optics import postselector, prepare_original

pre = prepare_original()
post = postselector("original")
print("preselected amplitudes :", pre.amplitudes.round(3))
print("postselected amplitudes:", post.amplitudes.round(3))

# %%
# Path projectors say "which arm the photon is in".  The sigma_x observables
# restricted to one arm say "where the polarization is".
for tag in ("piL", "piR", "xL", "xR"):
    wv = weak_value_analytic(observable(tag), pre, post)
    print(f"{tag:>3} = {wv.value.real:+.3f}{wv.value.imag:+.3f}j")

# %%
# The photon is found on the left, while its polarization shows up on the right.
# The arm projectors still add up to one, as completeness demands.
