"""Export the bundled scikit-image sample images as 512x512 RGB PNGs."""

import sys
from pathlib import Path

import numpy as np
from skimage import color, data, io, transform, util

NAMES = [
    "astronaut",
    "camera",
    "coffee",
    "chelsea",
    "rocket",
    "coins",
    "hubble_deep_field",
    "immunohistochemistry",
    "brick",
    "gravel",
]
SIZE = 512


def square(img):
    h, w = img.shape[:2]
    s = min(h, w)
    y, x = (h - s) // 2, (w - s) // 2
    return img[y : y + s, x : x + s]


def main(out):
    out.mkdir(parents=True, exist_ok=True)
    for name in NAMES:
        img = getattr(data, name)()
        if img.ndim == 2:
            img = color.gray2rgb(img)
        img = img[..., :3]
        img = transform.resize(square(img), (SIZE, SIZE), anti_aliasing=True)
        io.imsave(out / f"{name}.png", util.img_as_ubyte(np.clip(img, 0, 1)), check_contrast=False)
        print(out / f"{name}.png")


if __name__ == "__main__":
    main(Path(sys.argv[1] if len(sys.argv) > 1 else "corpus/images"))
