"""Command-line front end: encode, decode, metric, bench, info.

Exit codes: 0 success, 2 parse/validation error, 3 truncated stream.
Defaults (q_max=12, threshold=200, WGC on with gamma 0.25, lifting on)
reproduce the reference configuration; `info` prints everything needed to
re-run an identical encode. `MESHPRESS_SEED` overrides the sampling seed.
"""

from __future__ import annotations

import os
import sys

import click
import numpy as np

from . import codec, metrics
from .mesh import MeshError
from .meshio import ParseError, load_mesh, save_mesh

EXIT_PARSE = 2
EXIT_TRUNCATED = 3

CSV_HEADER = "level,bytes,bpv,rms_norm,max_norm"


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _load(path: str):
    try:
        return load_mesh(path)
    except (ParseError, MeshError, OSError) as exc:
        _fail(EXIT_PARSE, f"{path}: {exc}")


def _default_seed() -> int:
    return int(os.environ.get("MESHPRESS_SEED", "0"))


def _encode_options(fn):
    fn = click.option("--qmax", "q_max", type=click.IntRange(4, 16),
                      default=12, show_default=True,
                      help="Quantization precision in bits.")(fn)
    fn = click.option("--threshold", type=click.IntRange(min=0), default=200,
                      show_default=True,
                      help="Adaptive-precision distance threshold.")(fn)
    fn = click.option("--wgc/--no-wgc", default=True, show_default=True,
                      help="Geometric criterion on odd-vertex selection.")(fn)
    fn = click.option("--gamma", type=float, default=0.25, show_default=True,
                      help="Geometric criterion tolerance.")(fn)
    fn = click.option("--lifting/--no-lifting", default=True,
                      show_default=True, help="Wavelet lifting step.")(fn)
    fn = click.option("--adaptive/--no-adaptive", default=True,
                      show_default=True,
                      help="Per-vertex precision (off pins q_i to qmax).")(fn)
    fn = click.option("--max-levels", type=click.IntRange(min=0), default=32,
                      show_default=True,
                      help="Maximum simplification levels.")(fn)
    return fn


def _config(q_max, threshold, wgc, gamma, lifting, adaptive, max_levels):
    return codec.EncodeConfig(q_max=q_max, threshold=threshold, wgc=wgc,
                              wgc_gamma=gamma, lifting=lifting,
                              adaptive=adaptive, max_levels=max_levels)


@click.group()
def main():
    """Progressive triangle-mesh compression."""


@main.command(name="encode")
@click.argument("input_path", type=click.Path(exists=True, dir_okay=False))
@click.argument("output_path", type=click.Path(dir_okay=False, writable=True))
@click.option("--dump-levels", type=click.Path(file_okay=False), default=None,
              help="Write every hierarchy level as an OFF file here.")
@_encode_options
def cmd_encode(input_path, output_path, dump_levels, **opts):
    """Compress a mesh into a progressive .pmc stream."""
    mesh = _load(input_path)
    config = _config(**opts)
    try:
        stream, report = codec.encode(mesh, config)
    except (MeshError, ValueError) as exc:
        _fail(EXIT_PARSE, str(exc))
    with open(output_path, "wb") as fh:
        fh.write(stream.to_bytes())
    if dump_levels is not None:
        from .hierarchy import WgcConfig, build_hierarchy

        os.makedirs(dump_levels, exist_ok=True)
        records = build_hierarchy(mesh, WgcConfig(config.wgc, config.wgc_gamma),
                                  config.max_levels)
        save_mesh(mesh, os.path.join(dump_levels, "level_full.off"))
        for record in records:
            name = f"level_{record.level_index:02d}.off"
            save_mesh(record.coarse_mesh, os.path.join(dump_levels, name))
    click.echo(f"levels={stream.level_count}")
    click.echo(f"total_bpv={report.total_bpv:.4f}")
    click.echo(f"geometry_bpv={report.geometry_bpv:.4f}")
    click.echo(f"connectivity_bpv={report.connectivity_bpv:.4f}")


@main.command(name="decode")
@click.argument("input_path", type=click.Path(exists=True, dir_okay=False))
@click.argument("output_path", type=click.Path(dir_okay=False, writable=True))
@click.option("--level", type=int, default=None,
              help="Stop after this many refinement levels (default: all).")
def cmd_decode(input_path, output_path, level):
    """Decode a .pmc stream (or a prefix of it) to a mesh file."""
    with open(input_path, "rb") as fh:
        data = fh.read()
    try:
        mesh = codec.decode(data, up_to_level=level)
    except codec.TruncatedStreamError as exc:
        if exc.last_complete_level is not None:
            _fail(EXIT_TRUNCATED,
                  f"{exc} (last complete level: {exc.last_complete_level})")
        _fail(EXIT_TRUNCATED, str(exc))
    except (codec.StreamFormatError, ValueError) as exc:
        _fail(EXIT_PARSE, str(exc))
    save_mesh(mesh, output_path)
    click.echo(f"vertices={mesh.vertex_count} faces={mesh.face_count}")


@main.command(name="metric")
@click.argument("reference", type=click.Path(exists=True, dir_okay=False))
@click.argument("other", type=click.Path(exists=True, dir_okay=False))
@click.option("--spua", type=float, default=None,
              help="Samples per unit surface area (default: adaptive).")
@click.option("--seed", type=int, default=None, help="Sampling seed.")
@click.option("--csv", "as_csv", is_flag=True, help="Machine-readable row.")
def cmd_metric(reference, other, spua, seed, as_csv):
    """Sampled symmetric distance between two meshes."""
    a = _load(reference)
    b = _load(other)
    seed = _default_seed() if seed is None else seed
    try:
        result = metrics.sampled_distance(a, b, spua, seed=seed)
    except ValueError as exc:
        _fail(EXIT_PARSE, str(exc))
    if as_csv:
        click.echo("rms_norm,max_norm,samples")
        click.echo(f"{result.rms:.9g},{result.max_dist:.9g},"
                   f"{result.sample_count}")
    else:
        click.echo(f"rms={result.rms:.9g} max={result.max_dist:.9g} "
                   f"samples={result.sample_count}")


@main.command(name="bench")
@click.argument("input_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--output", "-o", type=click.Path(dir_okay=False,
              writable=True), default=None,
              help="CSV destination (default: stdout).")
@click.option("--spua", type=float, default=None,
              help="Samples per unit surface area for distortion.")
@click.option("--seed", type=int, default=None, help="Sampling seed.")
@_encode_options
def cmd_bench(input_path, output, spua, seed, **opts):
    """Rate-distortion curve: one CSV row per decodable prefix."""
    mesh = _load(input_path)
    seed = _default_seed() if seed is None else seed
    try:
        rows = codec.bench_rows(mesh, _config(**opts), seed=seed,
                                samples_per_unit_area=spua)
    except (MeshError, ValueError) as exc:
        _fail(EXIT_PARSE, str(exc))
    lines = [CSV_HEADER]
    lines += [f"{r.level},{r.nbytes},{r.bpv:.6f},{r.rms_norm:.9g},"
              f"{r.max_norm:.9g}" for r in rows]
    text = "\n".join(lines) + "\n"
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


@main.command(name="info")
@click.argument("input_path", type=click.Path(exists=True, dir_okay=False))
def cmd_info(input_path):
    """Print the header of a .pmc stream."""
    with open(input_path, "rb") as fh:
        data = fh.read()
    try:
        stream = codec.ProgressiveStream.from_bytes(data)
    except codec.TruncatedStreamError as exc:
        _fail(EXIT_TRUNCATED, str(exc))
    except codec.StreamFormatError as exc:
        _fail(EXIT_PARSE, str(exc))
    origin = np.asarray(stream.origin)
    click.echo(f"format_version={codec.FORMAT_VERSION}")
    click.echo(f"q_max={stream.q_max}")
    click.echo(f"threshold={stream.threshold}")
    click.echo(f"lifting={'on' if stream.lifting else 'off'}")
    click.echo(f"wgc={'on' if stream.wgc_enabled else 'off'}")
    click.echo(f"gamma={stream.wgc_gamma:.9g}")
    click.echo(f"adaptive={'on' if stream.adaptive else 'off'}")
    click.echo(f"origin={origin[0]:.17g},{origin[1]:.17g},{origin[2]:.17g}")
    click.echo(f"scale={stream.scale:.17g}")
    click.echo(f"base_vertices={stream.base_vertex_count}")
    click.echo(f"base_faces={stream.base_face_count}")
    click.echo(f"levels={stream.level_count}")
    click.echo(f"original_vertices={stream.original_vertex_count}")


if __name__ == "__main__":
    main()
