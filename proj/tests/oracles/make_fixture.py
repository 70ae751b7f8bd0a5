"""Writes the fixture network/image and prints reference values from PyTorch.

The C++ tests freeze the printed numbers. Regenerate with:
    python3 tests/oracles/make_fixture.py tests/data
"""
import math
import struct
import sys
from pathlib import Path

import torch

H, W, C = 4, 4, 2
CONV_OUT = 3
CLASSES = 4
LABEL = 2


def wave(n, a, b, amp):
    return [amp * math.sin(a * k + b) for k in range(n)]


def main(out_dir: Path) -> None:
    # Kernel in (kh, kw, in, out) order, dense in (in, out) order.
    conv_w = wave(3 * 3 * C * CONV_OUT, 0.71, 0.3, 0.6)
    conv_b = wave(CONV_OUT, 1.3, 0.1, 0.2)
    dense_in = (H // 2) * (W // 2) * CONV_OUT
    dense_w = wave(dense_in * CLASSES, 0.37, 1.1, 0.8)
    dense_b = wave(CLASSES, 2.1, 0.5, 0.1)
    image = [0.5 + 0.45 * math.sin(1.7 * k + 0.2) * math.cos(0.3 * k) for k in range(H * W * C)]

    with open(out_dir / "fixture_net.locn", "wb") as f:
        f.write(b"LOCN")
        f.write(struct.pack("<B", 1))
        f.write(struct.pack("<IIII", 5, H, W, C))
        f.write(struct.pack("<BIIII", 0, 3, 3, C, CONV_OUT))
        f.write(struct.pack(f"<{len(conv_w)}f", *conv_w))
        f.write(struct.pack(f"<{len(conv_b)}f", *conv_b))
        f.write(struct.pack("<B", 1))
        f.write(struct.pack("<B", 2))
        f.write(struct.pack("<B", 3))
        f.write(struct.pack("<BII", 4, dense_in, CLASSES))
        f.write(struct.pack(f"<{len(dense_w)}f", *dense_w))
        f.write(struct.pack(f"<{len(dense_b)}f", *dense_b))

    with open(out_dir / "fixture_image.ltns", "wb") as f:
        f.write(b"LTNS")
        f.write(struct.pack("<III", H, W, C))
        f.write(struct.pack(f"<{len(image)}f", *image))

    # Reference pass in float64 on the float32-rounded parameters.
    f32 = lambda v: torch.tensor(v, dtype=torch.float32).double()
    k = f32(conv_w).reshape(3, 3, C, CONV_OUT).permute(3, 2, 0, 1)
    x = f32(image).reshape(1, H, W, C).permute(0, 3, 1, 2).clone().requires_grad_(True)
    z = torch.nn.functional.conv2d(x, k, f32(conv_b), padding=1)
    z = torch.relu(z)
    z = torch.nn.functional.max_pool2d(z, 2)
    z = z.permute(0, 2, 3, 1).reshape(1, -1)
    logits = z @ f32(dense_w).reshape(dense_in, CLASSES) + f32(dense_b)
    loss = torch.nn.functional.cross_entropy(logits, torch.tensor([LABEL]))
    loss.backward()
    grad = x.grad.permute(0, 2, 3, 1).reshape(-1)

    fmt = lambda t: ", ".join(f"{v:.9g}" for v in t.tolist())
    print(f"logits: {{{fmt(logits.detach().reshape(-1))}}}")
    print(f"loss(y={LABEL}): {loss.item():.9g}")
    print(f"grad: {{{fmt(grad)}}}")


if __name__ == "__main__":
    main(Path(sys.argv[1] if len(sys.argv) > 1 else "."))
