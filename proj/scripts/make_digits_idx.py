#!/usr/bin/env python3
"""Build a 10,000-image 28x28 IDX3-ubyte dataset from sklearn's digits.

The classic 70k-image handwritten-digit corpus is not redistributable from
here, so we synthesize a stand-in with the same container format and image
geometry: the 1,797 8x8 sklearn digits are upsampled to 28x28 and augmented
to 10,000 images with seeded shifts, rotations, per-image contrast (writing
pressure), smooth illumination fields, and sensor noise. The illumination
and contrast variation matter beyond realism: they give the covariance a
cleanly decaying top-of-spectrum like a real camera corpus, instead of the
near-degenerate eigenvalue plateaus that pure geometric augmentation of
1,797 base images produces. Everything is seeded, so the output is
reproducible byte-for-byte.

Usage: python3 scripts/make_digits_idx.py [out_path]
"""

import struct
import sys

import numpy as np
from scipy import ndimage
from sklearn.datasets import load_digits

COUNT = 10_000
SIDE = 28
SEED = 7


def illumination_patterns() -> np.ndarray:
    """Four orthonormal low-frequency fields (flattened, unit L2 norm)."""
    t = (np.arange(SIDE) + 0.5) / SIDE
    cx = np.cos(np.pi * t)
    one = np.ones(SIDE)
    fields = [
        np.outer(one, one),
        np.outer(one, cx),
        np.outer(cx, one),
        np.outer(cx, cx),
    ]
    pats = np.stack([f.ravel() for f in fields])
    return pats / np.linalg.norm(pats, axis=1, keepdims=True)


# Uniform-[0, a] coefficients give these patterns variances a^2/12; the a's
# are chosen for a decaying, well-separated top of the spectrum (roughly
# 20, 12, 7, 4 in flattened-vector units) without saturating many pixels.
ILLUM_RANGE = np.array([15.5, 12.0, 9.2, 7.1])


def main() -> None:
    out_path = sys.argv[1] if len(sys.argv) > 1 else "data/digits-10k-idx3-ubyte"
    rng = np.random.default_rng(SEED)
    pats = illumination_patterns()

    base = load_digits().images / 16.0  # (1797, 8, 8) in [0, 1]
    images = np.empty((COUNT, SIDE, SIDE), dtype=np.uint8)
    for i in range(COUNT):
        src = base[i % len(base)]
        img = ndimage.zoom(src, SIDE / 8.0, order=1)
        angle = rng.uniform(-12.0, 12.0)
        img = ndimage.rotate(img, angle, reshape=False, order=1, mode="constant")
        shift = rng.uniform(-2.0, 2.0, size=2)
        img = ndimage.shift(img, shift, order=1, mode="constant")
        img *= rng.uniform(0.5, 0.7)  # writing pressure / contrast
        flat = img.ravel()
        flat += (rng.uniform(0.0, 1.0, 4) * ILLUM_RANGE) @ pats
        flat += rng.normal(0.0, 0.02, flat.shape)
        images[i] = (np.clip(flat, 0.0, 1.0).reshape(SIDE, SIDE) * 255.0).round().astype(
            np.uint8)

    with open(out_path, "wb") as f:
        f.write(struct.pack(">IIII", 0x00000803, COUNT, SIDE, SIDE))
        f.write(images.tobytes())
    print(f"wrote {COUNT} images to {out_path}")


if __name__ == "__main__":
    main()
