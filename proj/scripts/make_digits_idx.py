#!/usr/bin/env python3
"""Regenerate data/digits28x28.idx: scikit-learn's bundled 8x8 digit images
(1797 examples, pixel values 0..16) rescaled to 0..255 and upsampled to
28x28 with nearest-neighbor interpolation."""

import struct
from pathlib import Path

import numpy as np
from sklearn.datasets import load_digits


def main() -> None:
    digits = load_digits()
    images = np.rint(digits.images * (255.0 / 16.0)).astype(np.uint8)
    index = np.arange(28) * 8 // 28
    images = images[:, index][:, :, index]
    out = Path(__file__).resolve().parent.parent / "data" / "digits28x28.idx"
    out.parent.mkdir(exist_ok=True)
    with open(out, "wb") as f:
        f.write(struct.pack(">IIII", 0x00000803, images.shape[0], 28, 28))
        f.write(images.tobytes())
    print(f"wrote {out} ({images.shape[0]} images)")


if __name__ == "__main__":
    main()
