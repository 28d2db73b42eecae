#!/usr/bin/env python3
"""Brute-force reference values for the zigzag benchmark.

Independent of the C++ kernels: the mask is rasterized with exact integer
arithmetic, PNM counts come from per-class summed-area tables with clipped
windows, and IoU sums are evaluated directly pixel by pixel with numpy.

Usage: zigzag_oracle.py [size] [d]
Prints one line per n: n, miou, pnm_iou (17 significant digits).
"""
import sys

import numpy as np


def zigzag(n, w, h):
    """Class 0 left of the polyline (ties included), class 1 right of it."""
    half = 2 ** (n + 1)
    # scale every coordinate by 2 * half so vertices and centers are integers
    scale = 2 * half
    xs = [w * scale // 2]
    ys = [0]
    for k in range(2 ** n):
        xs.append(w * scale if k % 2 == 0 else 0)
        ys.append((2 * k + 1) * h * scale // half)
    xs.append(w * scale // 2)
    ys.append(h * scale)
    xs = np.array(xs, dtype=np.int64)
    ys = np.array(ys, dtype=np.int64)

    cy = (2 * np.arange(h, dtype=np.int64) + 1) * half
    cx = (2 * np.arange(w, dtype=np.int64) + 1) * half
    out = np.ones((h, w), dtype=np.int64)
    for r in range(h):
        y = cy[r]
        seg = np.searchsorted(ys, y, side="right") - 1
        seg = min(seg, len(ys) - 2)
        x0, y0, x1, y1 = xs[seg], ys[seg], xs[seg + 1], ys[seg + 1]
        lhs = (cx - x0) * (y1 - y0)
        rhs = (x1 - x0) * (y - y0)
        out[r, lhs <= rhs] = 0
    return out


def pnm_counts(mask, d):
    h, w = mask.shape
    r = d // 2
    y0 = np.clip(np.arange(h) - r, 0, h)
    y1 = np.clip(np.arange(h) + r + 1, 0, h)
    x0 = np.clip(np.arange(w) - r, 0, w)
    x1 = np.clip(np.arange(w) + r + 1, 0, w)
    same = np.zeros((h, w), dtype=np.int64)
    for c in np.unique(mask):
        ind = (mask == c).astype(np.int64)
        sat = np.zeros((h + 1, w + 1), dtype=np.int64)
        sat[1:, 1:] = ind.cumsum(0).cumsum(1)
        box = (sat[y1][:, x1] - sat[y0][:, x1] - sat[y1][:, x0] + sat[y0][:, x0])
        same[ind == 1] = box[ind == 1]
    total = np.outer(y1 - y0, x1 - x0)
    return same, total


def mean_iou(pred, gt, weight):
    scores = []
    for k in np.union1d(np.unique(pred), np.unique(gt)):
        inter = np.sum(weight * ((pred == gt) & (gt == k)))
        union = np.sum(weight * ((pred == k) | (gt == k)))
        if union > 0:
            scores.append(inter / union)
    return float(np.mean(scores))


def main():
    size = int(sys.argv[1]) if len(sys.argv) > 1 else 1024
    d = int(sys.argv[2]) if len(sys.argv) > 2 else 35
    pred = np.zeros((size, size), dtype=np.int64)
    pred[:, size // 2:] = 1
    for n in range(1, 6):
        gt = zigzag(n, size, size)
        same, total = pnm_counts(gt, d)
        rho = 1.0 - np.log(same / total)
        miou = mean_iou(pred, gt, np.ones_like(rho))
        piou = mean_iou(pred, gt, rho)
        frac = float(np.mean(gt == 0))
        print(f"{n} {miou:.17g} {piou:.17g} {frac:.17g}")


if __name__ == "__main__":
    main()
