"""Command-line front end: ``mdt <command> ...``.

Exit codes: 0 success, 2 usage or input error, 3 corrupt artifact,
4 capacity or contract violation.  Every randomized command takes
``--seed``; without it the MDT_SEED environment variable is used, and
without that the seed is 0.
"""
from __future__ import annotations

import os
import sys
from collections import Counter

import click

from . import entropy as ent
from .errors import CapacityError, ContractViolation, CorruptArtifact, MdtError
from .filters import (BloomFilter, CountingBloomFilter, QuotientFilter, bloom_params,
                      cbf_counter_bits, dump_filter, load_filter, qf_params)
from .sketches import (Boosted, BoostConfig, DgimSum, DgimWindow, DistinctCounter,
                       MinHashSketch, MorrisCounter, dump_sketch, load_sketch, median_copies,
                       minhash_k)
from .streammatch import KMismatchMatcher, KrMatcher, PpMatcher, make_context
from .textindex import CsaIndex, FmIndex, dump_index, load_index

EXIT_USAGE, EXIT_CORRUPT, EXIT_CAPACITY = 2, 3, 4
MAX_TEXT_BYTES = 1 << 28
CHUNK = 1 << 16


class CommandFailed(click.ClickException):
    def __init__(self, message, code):
        super().__init__(message)
        self.exit_code = code


class MdtGroup(click.Group):
    """Turns library exceptions into the documented exit codes."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except CorruptArtifact as e:
            raise CommandFailed(f"corrupt artifact: {e}", EXIT_CORRUPT) from e
        except (CapacityError, ContractViolation) as e:
            raise CommandFailed(str(e), EXIT_CAPACITY) from e
        except (MdtError, OSError, UnicodeError) as e:
            raise CommandFailed(str(e), EXIT_USAGE) from e


seed_option = click.option("--seed", type=int, envvar="MDT_SEED", default=0,
                           show_default=True, help="random seed (falls back to $MDT_SEED)")


def _tokens(f):
    """Non-empty lines of a binary stream, without line terminators."""
    for line in f:
        line = line.rstrip(b"\r\n")
        if line:
            yield line


def _ints(f, what):
    for lineno, line in enumerate(f, 1):
        line = line.strip()
        if not line:
            continue
        try:
            yield int(line)
        except ValueError:
            raise CommandFailed(f"line {lineno}: expected an integer {what}, got {line[:40]!r}",
                                EXIT_USAGE) from None


def _write_bytes(path, data: bytes):
    tmp = path + ".tmp"
    with open(tmp, "wb") as fh:
        fh.write(data)
    os.replace(tmp, path)


def _read_bytes(path) -> bytes:
    with open(path, "rb") as fh:
        return fh.read()


@click.group(cls=MdtGroup)
def main():
    """Compact data structures and streaming sketches."""


# ------------------------------------------------------------------ entropy

@main.command()
@click.argument("file", type=click.File("rb"))
@click.option("--k", "k", type=int, default=0, show_default=True, help="highest context order")
@click.option("--huffman", is_flag=True, help="also report the Huffman-coded length")
@click.option("--index", "index_kind", type=click.Choice(["fm", "csa"]),
              help="build an index and report its bits per symbol")
@click.option("--decimals", type=click.IntRange(0, 12), default=2, show_default=True)
def entropy(file, k, huffman, index_kind, decimals):
    """Empirical entropies H0..Hk of FILE in bits per symbol."""
    data = file.read()
    if not data:
        raise CommandFailed("empty input", EXIT_USAGE)
    if not 0 <= k <= len(data):
        raise CommandFailed(f"k must be between 0 and the file length ({len(data)})", EXIT_USAGE)
    click.echo(f"n={len(data)}")
    click.echo(f"sigma={len(set(data))}")
    for order in range(k + 1):
        click.echo(f"H{order}={ent.hk(data, order):.{decimals}f}")
    if huffman:
        freqs = ent.FrequencyTable.of(data)
        code = ent.huffman_build(freqs)
        click.echo(f"huffman_bits={code.encoded_length(freqs)}")
    if index_kind:
        ix = (FmIndex if index_kind == "fm" else CsaIndex)(data)
        click.echo(f"{index_kind}_bits_per_symbol={ix.bits_per_symbol():.6f}")


# -------------------------------------------------------------------- index

@main.group(cls=MdtGroup)
def index():
    """Build and query compressed full-text indexes."""


@index.command("build")
@click.argument("text", type=click.File("rb"))
@click.option("-o", "--output", required=True, type=click.Path(dir_okay=False))
@click.option("--kind", type=click.Choice(["fm", "csa"]), default="fm", show_default=True)
@click.option("--max-bytes", type=int, default=MAX_TEXT_BYTES, show_default=True,
              help="refuse texts larger than this (construction is in memory)")
def index_build(text, output, kind, max_bytes):
    """Index TEXT and write the index to OUTPUT."""
    data = text.read(max_bytes + 1)
    if len(data) > max_bytes:
        raise CommandFailed(f"text exceeds {max_bytes} bytes", EXIT_USAGE)
    ix = (FmIndex if kind == "fm" else CsaIndex)(data)
    _write_bytes(output, dump_index(ix))
    click.echo(f"n={ix.n} sigma={ix.sigma} space_bits={sum(ix.space_bits().values())} "
               f"bits_per_symbol={ix.bits_per_symbol():.6f}")


def _load_index(path):
    return load_index(_read_bytes(path))


def _pattern(pattern: str) -> bytes:
    return pattern.encode("utf-8", "surrogateescape")


@index.command("count")
@click.argument("index_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("pattern")
def index_count(index_file, pattern):
    """Number of occurrences of PATTERN."""
    click.echo(_load_index(index_file).count(_pattern(pattern)))


@index.command("locate")
@click.argument("index_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("pattern")
def index_locate(index_file, pattern):
    """1-based start positions of PATTERN, ascending, one per line."""
    for pos in sorted(_load_index(index_file).locate(_pattern(pattern))):
        click.echo(pos)


@index.command("extract")
@click.argument("index_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("start", type=int)
@click.argument("length", type=int)
def index_extract(index_file, start, length):
    """Write LENGTH raw bytes of the text starting at 1-based START."""
    out = _load_index(index_file).extract(start, length)
    sys.stdout.buffer.write(out)
    sys.stdout.buffer.flush()


# ------------------------------------------------------------------ filters

@main.group(cls=MdtGroup)
def filter():  # noqa: A001 - command name
    """Approximate membership filters (bloom, cbf, qf)."""


@filter.command("build")
@click.option("--kind", type=click.Choice(["bloom", "cbf", "qf"]), default="bloom",
              show_default=True)
@click.option("-m", "capacity", type=click.IntRange(min=1), required=True,
              help="number of keys to size for")
@click.option("-d", "delta", type=float, required=True, help="target false-positive rate")
@click.option("--t", "t", type=click.IntRange(1, 64), help="cbf counter bits")
@click.option("--gamma", type=float, default=1e-4, show_default=True,
              help="cbf: tolerated overflow probability, used when --t is absent")
@click.option("--alpha", type=float, default=0.5, show_default=True, help="qf target load")
@click.option("--exact", is_flag=True, help="bloom/cbf: keep the exact minimal M")
@click.option("-o", "--output", type=click.Path(dir_okay=False),
              help="write an empty filter here")
@seed_option
def filter_build(kind, capacity, delta, t, gamma, alpha, exact, output, seed):
    """Choose parameters for KIND and optionally write an empty filter."""
    if not 0 < delta < 1:
        raise CommandFailed("-d must be in (0, 1)", EXIT_USAGE)
    if kind == "qf":
        q, r = qf_params(capacity, delta, alpha)
        click.echo(f"q={q} r={r}")
        click.echo(f"space_bits={(1 << q) * (r + 3)}")
        f = QuotientFilter(q, r, seed) if output else None
    else:
        k, M = bloom_params(capacity, delta, exact)
        if kind == "bloom":
            click.echo(f"k={k} M={M}")
            click.echo(f"space_bits={M}")
            f = BloomFilter(M, k, seed, capacity=capacity) if output else None
        else:
            if t is None:
                t = cbf_counter_bits(delta, gamma)
            click.echo(f"k={k} M={M} t={t}")
            click.echo(f"space_bits={M * t}")
            f = CountingBloomFilter(M, k, t, seed, capacity=capacity) if output else None
    if output:
        _write_bytes(output, dump_filter(f))


@filter.command("add")
@click.argument("filter_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("keys", type=click.File("rb"), default="-")
def filter_add(filter_file, keys):
    """Insert newline-delimited KEYS (default: standard input)."""
    f = load_filter(_read_bytes(filter_file))
    rejected = 0
    for key in _tokens(keys):
        if rejected:
            rejected += 1
            continue
        try:
            f.add(key)
        except CapacityError:
            rejected = 1
    _write_bytes(filter_file, dump_filter(f))
    if isinstance(f, BloomFilter) and f.over_capacity:
        click.echo(f"warning: {f.inserted} keys exceed the sized capacity {f.capacity}",
                   err=True)
    if rejected:
        raise CommandFailed(f"filter full: rejected {rejected} keys", EXIT_CAPACITY)


@filter.command("del")
@click.argument("filter_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("keys", type=click.File("rb"), default="-")
def filter_del(filter_file, keys):
    """Remove KEYS (cbf and qf only).  Nothing is written if any removal fails."""
    f = load_filter(_read_bytes(filter_file))
    if isinstance(f, BloomFilter):
        raise CommandFailed("a plain Bloom filter does not support deletion", EXIT_USAGE)
    for key in _tokens(keys):
        f.remove(key)
    _write_bytes(filter_file, dump_filter(f))


@filter.command("query")
@click.argument("filter_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("keys", type=click.File("rb"), default="-")
def filter_query(filter_file, keys):
    """Print 1 (maybe present) or 0 (absent) for each key."""
    f = load_filter(_read_bytes(filter_file))
    out = click.get_text_stream("stdout")
    for key in _tokens(keys):
        out.write("1\n" if key in f else "0\n")


# ----------------------------------------------------------------- sketches

@main.group(cls=MdtGroup)
def sketch():
    """Streaming estimators: distinct, minhash, morris, dgim."""


def _save(path, obj):
    if path:
        _write_bytes(path, dump_sketch(obj))


@sketch.command("distinct")
@click.argument("input", type=click.File("rb"), default="-")
@click.option("--eps", type=float, default=0.25, show_default=True)
@click.option("--delta", type=float, help="boost to failure probability delta (median of copies)")
@click.option("--sketch-in", type=click.Path(exists=True, dir_okay=False),
              help="continue from a saved sketch (its parameters win)")
@click.option("--sketch-out", type=click.Path(dir_okay=False))
@seed_option
def sketch_distinct(input, eps, delta, sketch_in, sketch_out, seed):
    """Estimate the number of distinct lines in INPUT."""
    if sketch_in:
        s = load_sketch(_read_bytes(sketch_in))
        insts = s.instances if isinstance(s, Boosted) else [s]
        if not all(isinstance(i, DistinctCounter) for i in insts):
            raise CommandFailed("--sketch-in is not a distinct-count sketch", EXIT_USAGE)
    elif delta is None:
        s = DistinctCounter(eps=eps, seed=seed)
        insts = [s]
    else:
        cfg = BoostConfig(eps, delta, 1, median_copies(delta))
        s = Boosted(lambda sd: DistinctCounter(eps=eps, seed=sd), cfg, seed)
        insts = s.instances
    batch = []
    for tok in _tokens(input):
        batch.append(tok)
        if len(batch) >= CHUNK:
            for i in insts:
                i.offer_many(batch)
            batch = []
    if batch:
        for i in insts:
            i.offer_many(batch)
    click.echo(f"{s.estimate():.6f}")
    _save(sketch_out, s)


@sketch.command("minhash")
@click.argument("inputs", nargs=-1, type=click.File("rb"))
@click.option("--k", "k", type=click.IntRange(min=1), help="number of hash functions")
@click.option("--eps", type=float, default=0.1, show_default=True)
@click.option("--delta", type=float, default=0.05, show_default=True)
@click.option("--compare", nargs=2, type=click.Path(exists=True, dir_okay=False),
              help="two saved sketches to compare")
@click.option("--sketch-out", type=click.Path(dir_okay=False),
              help="save the sketch of a single input")
@seed_option
def sketch_minhash(inputs, k, eps, delta, compare, sketch_out, seed):
    """Jaccard estimate of two token files, or of two saved sketches (--compare)."""
    if compare:
        if inputs:
            raise CommandFailed("give either input files or --compare", EXIT_USAGE)
        a, b = (load_sketch(_read_bytes(p)) for p in compare)
        if not (isinstance(a, MinHashSketch) and isinstance(b, MinHashSketch)):
            raise CommandFailed("--compare needs two MinHash sketches", EXIT_USAGE)
        click.echo(f"{a.jaccard(b):.6f}")
        return
    if not 1 <= len(inputs) <= 2:
        raise CommandFailed("give one or two input files", EXIT_USAGE)
    if k is None:
        k = minhash_k(eps, delta)
    sketches = []
    for f in inputs:
        toks = list(_tokens(f))
        if not toks:
            raise CommandFailed(f"{f.name}: no tokens", EXIT_USAGE)
        sketches.append(MinHashSketch.build(toks, k, seed))
    if sketch_out:
        if len(sketches) != 1:
            raise CommandFailed("--sketch-out takes a single input", EXIT_USAGE)
        _save(sketch_out, sketches[0])
    if len(sketches) == 2:
        click.echo(f"{sketches[0].jaccard(sketches[1]):.6f}")
    else:
        click.echo(f"k={k}")


@sketch.command("morris")
@click.argument("input", type=click.File("rb"), required=False)
@click.option("--events", type=click.IntRange(min=0),
              help="number of events (otherwise: non-empty lines of INPUT)")
@click.option("--eps", type=float, help="boost to relative error eps ...")
@click.option("--delta", type=float, help="... with failure probability delta")
@click.option("--sketch-in", type=click.Path(exists=True, dir_okay=False))
@click.option("--sketch-out", type=click.Path(dir_okay=False))
@seed_option
def sketch_morris(input, events, eps, delta, sketch_in, sketch_out, seed):
    """Approximate event count in O(log log m) bits per counter."""
    if events is None:
        if input is None:
            raise CommandFailed("give --events or an input file", EXIT_USAGE)
        events = sum(1 for _ in _tokens(input))
    if (eps is None) != (delta is None):
        raise CommandFailed("--eps and --delta go together", EXIT_USAGE)
    if sketch_in:
        s = load_sketch(_read_bytes(sketch_in))
    elif eps is None:
        s = MorrisCounter(seed)
    else:
        s = Boosted(MorrisCounter, BoostConfig.morris(eps, delta), seed)
    insts = s.instances if isinstance(s, Boosted) else [s]
    if not all(isinstance(i, MorrisCounter) for i in insts):
        raise CommandFailed("--sketch-in is not a Morris sketch", EXIT_USAGE)
    for i in insts:
        i.add(events)
    click.echo(f"{s.estimate():.6f}")
    _save(sketch_out, s)


@sketch.command("dgim")
@click.argument("input", type=click.File("rb"), default="-")
@click.option("--window", type=click.IntRange(min=1), help="window length W")
@click.option("--eps", type=float, default=0.5, show_default=True)
@click.option("--q", "q", type=click.IntRange(1, 64),
              help="values are q-bit integers (default: bits)")
@click.option("--query", "queries", multiple=True, type=click.IntRange(min=1),
              help="suffix length to report (repeatable; default W)")
@click.option("--sketch-in", type=click.Path(exists=True, dir_okay=False))
@click.option("--sketch-out", type=click.Path(dir_okay=False))
def sketch_dgim(input, window, eps, q, queries, sketch_in, sketch_out):
    """Number of 1s (or sum of values) among the last few stream items."""
    if sketch_in:
        s = load_sketch(_read_bytes(sketch_in))
        if not isinstance(s, (DgimWindow, DgimSum)):
            raise CommandFailed("--sketch-in is not a DGIM sketch", EXIT_USAGE)
    elif window is None:
        raise CommandFailed("--window is required", EXIT_USAGE)
    elif q is None:
        s = DgimWindow(window, eps)
    else:
        s = DgimSum(window, eps, q)
    for v in _ints(input, "bit" if isinstance(s, DgimWindow) else "value"):
        s.push(v)
    for m in queries or (s.W,):
        click.echo(s.count(m) if isinstance(s, DgimWindow) else s.sum(m))
    _save(sketch_out, s)


# ------------------------------------------------------------ stream match

@main.group(cls=MdtGroup)
def stream():
    """Streaming pattern matching over standard input."""


@stream.command("match")
@click.argument("pattern_file", type=click.File("rb"))
@click.option("--k", "k", type=click.IntRange(min=0), default=0, show_default=True,
              help="allowed mismatches")
@click.option("--engine", type=click.Choice(["pp", "kr"]), default="pp", show_default=True)
@click.option("--m-max", type=click.IntRange(min=2), default=1 << 20, show_default=True,
              help="stream length the fingerprint prime is sized for")
@click.option("--keep-newline", is_flag=True,
              help="keep a trailing newline of the pattern file")
@click.option("--input", "input_", type=click.File("rb"), default="-",
              help="stream source (default: standard input)")
@seed_option
def stream_match(pattern_file, k, engine, m_max, keep_newline, input_, seed):
    """Print "position<TAB>mismatches" for every alignment ending position."""
    pattern = pattern_file.read()
    if not keep_newline and pattern.endswith(b"\n"):
        pattern = pattern[:-1]
    if not pattern:
        raise CommandFailed("empty pattern", EXIT_USAGE)
    ctx = make_context(m_max, len(pattern), seed)
    out = sys.stdout
    if k:
        m = KMismatchMatcher(pattern, k, ctx, engine)
        for chunk in iter(lambda: input_.read(CHUNK), b""):
            out.write("".join(f"{pos}\t{mm}\n" for pos, mm in m.feed(chunk)))
    else:
        m = (PpMatcher if engine == "pp" else KrMatcher)(pattern, ctx)
        for chunk in iter(lambda: input_.read(CHUNK), b""):
            out.write("".join(f"{pos}\t0\n" for pos in m.feed(chunk)))
        if engine == "pp":
            m.finish()
    out.flush()


if __name__ == "__main__":
    main()
