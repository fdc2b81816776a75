"""``qimp`` command line: encode, edges, reconstruct, compare.

Every command is deterministic for a given configuration and seed; JSON is
written with sorted keys and shortest round-trip float formatting.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import codec, edges, similarity
from .codec import ImageBuffer
from .errors import CorruptHistogramError, DomainError, ParseError, ResourceError
from .formats import read_idx_images, read_pgm, write_pgm
from .statevector import qubit_zero_probability, sample

MAX_PIXELS = 1 << 20

EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_DOMAIN = 4
EXIT_RESOURCE = 5
EXIT_IO = 6


@dataclass
class RunConfig:
    command: str
    inputs: list = field(default_factory=list)
    out: Optional[Path] = None
    method: str = "backward"
    shots: Optional[int] = None
    seed: int = 0
    transpose: bool = False
    threshold_fraction: Optional[float] = None
    encoding: str = "qpie"
    compare_edges: bool = False
    ascii: bool = False
    idx_file: Optional[Path] = None
    idx_index: list = field(default_factory=list)

    def __post_init__(self):
        if self.command not in ("encode", "edges", "reconstruct", "compare"):
            raise ValueError(f"unknown command {self.command!r}")
        edges.Method(self.method)
        if self.shots is not None and self.shots < 1:
            raise ValueError(f"--shots must be >= 1, got {self.shots}")
        if self.threshold_fraction is not None and not 0.0 <= self.threshold_fraction <= 1.0:
            raise ValueError(f"--threshold must lie in [0, 1], got {self.threshold_fraction}")


def _load_images(config: RunConfig):
    if config.idx_file is not None:
        images = [read_idx_images(config.idx_file, k) for k in config.idx_index]
    else:
        images = [read_pgm(p) for p in config.inputs]
    for img in images:
        if img.rows * img.cols > MAX_PIXELS:
            raise ResourceError(
                f"{img.rows}x{img.cols} image exceeds the {MAX_PIXELS}-amplitude limit"
            )
    return images


def _single_image(config):
    images = _load_images(config)
    if len(images) != 1:
        raise ValueError(f"{config.command} takes exactly one image, got {len(images)}")
    return images[0]


def _write_json(path, payload):
    Path(path).write_text(json.dumps(payload, indent=1, sort_keys=True) + "\n", encoding="utf-8")


def _sidecar_path(out):
    return Path(out).with_suffix(".json")


def render_sidecar(payload) -> ImageBuffer:
    """Rebuild the edge PGM from its JSON sidecar."""
    emap = edges.EdgeMap(
        edges.Method(payload["method"]),
        payload["rows"],
        payload["cols"],
        np.asarray(payload["values"], dtype=np.float64),
        np.asarray([c == "padded" for c in payload["coverage"]], dtype=bool),
        payload["magnitude_only"],
    )
    img = edges.edge_image(
        emap,
        payload["render_mode"],
        payload["threshold_fraction"] if payload["threshold_fraction"] is not None else 0.5,
        payload["depth_bits"],
    )
    return img.transpose() if payload["transpose"] else img


def cmd_encode(config):
    img = _single_image(config)
    if config.encoding == "qpie":
        enc = codec.qpie_encode(img)
        payload = {"norm_factor": enc.norm_factor}
    elif config.encoding == "frqi":
        enc = codec.frqi_encode(img)
        payload = {"n": enc.n, "thetas": enc.thetas.tolist()}
    elif config.encoding == "neqr":
        enc = codec.neqr_encode(img)
        payload = {"n": enc.n, "q": enc.q}
    else:
        raise ValueError(f"unknown encoding {config.encoding!r}")
    payload.update(
        encoding=config.encoding,
        rows=img.rows,
        cols=img.cols,
        depth_bits=img.depth_bits,
        flatten_order="column-major",
        num_qubits=enc.state.num_qubits,
        amplitudes=enc.state.amplitudes.real.tolist(),
    )
    _write_json(config.out, payload)


def cmd_edges(config):
    img = _single_image(config)
    if config.transpose:
        img = img.transpose()
    enc = codec.qpie_encode(img)
    if config.shots is None:
        emap = edges.detect(enc, config.method)
    else:
        emap = edges.detect_from_shots(enc, config.method, config.shots, config.seed)
    payload = {
        "method": emap.method.value,
        "rows": emap.rows,
        "cols": emap.cols,
        "values": emap.values.tolist(),
        "coverage": emap.coverage(),
        "magnitude_only": emap.magnitude_only,
        "shots": config.shots,
        "seed": config.seed,
        "transpose": config.transpose,
        "render_mode": "abs" if config.threshold_fraction is None else "threshold",
        "threshold_fraction": config.threshold_fraction,
        "depth_bits": img.depth_bits,
    }
    write_pgm(render_sidecar(payload), config.out, binary=not config.ascii)
    _write_json(_sidecar_path(config.out), payload)


def cmd_reconstruct(config):
    img = _single_image(config)
    enc = codec.qpie_encode(img)
    if config.shots is None:
        amps = np.abs(enc.state.amplitudes[: img.rows * img.cols])
        pixels = np.rint(amps / amps.max() * img.max_value).astype(np.int64)
        estimate = ImageBuffer.from_flat(pixels, img.rows, img.cols, img.depth_bits)
    else:
        hist = sample(enc.state, config.shots, config.seed)
        estimate = codec.qpie_estimate(hist, img.rows, img.cols, img.depth_bits)
    flat = img.flat().astype(np.float64)
    reference = flat / flat.max() * img.max_value
    rmse = float(np.sqrt(np.mean((estimate.flat() - reference) ** 2)))
    write_pgm(estimate, config.out, binary=not config.ascii)
    _write_json(
        _sidecar_path(config.out),
        {
            "rows": img.rows,
            "cols": img.cols,
            "shots": config.shots,
            "seed": config.seed,
            "rmse": rmse,
            "unobserved": list(estimate.unobserved),
        },
    )


def cmd_compare(config):
    images = _load_images(config)
    if len(images) != 2:
        raise ValueError(f"compare takes exactly two images, got {len(images)}")
    a, b = images
    if config.compare_edges:
        states = [similarity.edge_state(img, config.method) for img in images]
    else:
        if a.pixels.shape != b.pixels.shape:
            raise ValueError(f"image shapes differ: {a.pixels.shape} vs {b.pixels.shape}")
        states = [codec.qpie_encode(img).state for img in images]
    if config.shots is None:
        exact = qubit_zero_probability(
            similarity.build_swap_test(*states), 2 * states[0].num_qubits
        )
        result = similarity.SimilarityResult(exact, None, None, exact)
    else:
        result = similarity.compare(*states, config.shots, config.seed)
    payload = result.to_dict()
    payload.update(
        seed=config.seed,
        edges=config.compare_edges,
        method=config.method if config.compare_edges else None,
    )
    _write_json(config.out, payload)


COMMANDS = {
    "encode": cmd_encode,
    "edges": cmd_edges,
    "reconstruct": cmd_reconstruct,
    "compare": cmd_compare,
}


def run(config: RunConfig) -> int:
    """Execute one command; returns the process exit status."""
    try:
        COMMANDS[config.command](config)
    except ParseError as exc:
        return _fail(f"parse error: {exc}", EXIT_PARSE)
    except (DomainError, CorruptHistogramError) as exc:
        return _fail(f"domain error: {exc}", EXIT_DOMAIN)
    except (ResourceError, MemoryError) as exc:
        return _fail(f"resource error: {exc}", EXIT_RESOURCE)
    except OSError as exc:
        return _fail(f"i/o error: {exc}", EXIT_IO)
    except ValueError as exc:
        return _fail(f"invalid argument: {exc}", EXIT_USAGE)
    return 0


def _fail(message, status):
    print(f"qimp: {message}", file=sys.stderr)
    return status


def build_parser():
    parser = argparse.ArgumentParser(prog="qimp", description="Quantum image processing simulator.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("inputs", nargs="*", type=Path, help="PGM input file(s)")
    common.add_argument("--out", type=Path, required=True)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--shots", type=int, help="measurement shots; omit for exact amplitudes")
    common.add_argument("--idx-file", type=Path, help="read images from an IDX3-ubyte file")
    common.add_argument("--idx-index", type=int, nargs="+", default=[], metavar="K")
    common.add_argument("--method", choices=[m.value for m in edges.Method], default="backward")

    p = sub.add_parser("encode", parents=[common], help="write an encoded statevector as JSON")
    p.add_argument("--encoding", choices=["qpie", "frqi", "neqr"], default="qpie")

    p = sub.add_parser("edges", parents=[common], help="detect edges, write PGM plus JSON sidecar")
    p.add_argument("--transpose", action="store_true", help="difference along rows instead of columns")
    p.add_argument("--threshold", type=float, dest="threshold_fraction")
    p.add_argument("--ascii", action="store_true", help="write P2 instead of P5")

    p = sub.add_parser("reconstruct", parents=[common], help="sample a QPIE state and rebuild the image")
    p.add_argument("--ascii", action="store_true", help="write P2 instead of P5")

    p = sub.add_parser("compare", parents=[common], help="swap-test similarity of two images")
    p.add_argument("--edges", action="store_true", dest="compare_edges", help="compare edge maps instead of images")
    return parser


def main(argv=None) -> int:
    args = vars(build_parser().parse_args(argv))
    if args.get("idx_file") is None and not args.get("inputs"):
        return _fail("invalid argument: give PGM inputs or --idx-file", EXIT_USAGE)
    try:
        config = RunConfig(**args)
    except ValueError as exc:
        return _fail(f"invalid argument: {exc}", EXIT_USAGE)
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
