"""Command-line interface: hash, kat, selftest and campaign subcommands.

Exit codes: 0 success, 1 verification or data failure, 2 usage error.
"""

import argparse
import sys
import time
from pathlib import Path

from .echo256 import echo_hash
from .faultsim import ALGORITHMS, MODELS, PERSISTENCE, CampaignConfig, run_campaign
from .fugue256 import fugue_hash
from .kat import KatFormatError, read_kat
from .selftest import run_selftest

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def _digest(algorithm: str, message: bytes, salt: bytes | None = None,
            bit_length: int | None = None) -> bytes:
    if algorithm == "echo256":
        return echo_hash(message, salt=salt or bytes(16), bit_length=bit_length)
    return fugue_hash(message, bit_length=bit_length)


def _salt(parser, text):
    try:
        salt = bytes.fromhex(text)
    except ValueError:
        parser.error(f"salt is not hex: {text!r}")
    if len(salt) != 16:
        parser.error(f"salt must be 16 bytes, got {len(salt)}")
    return salt


def cmd_hash(args, parser) -> int:
    salt = None
    if args.salt is not None:
        if args.algorithm != "echo256":
            parser.error("--salt is only accepted for echo256")
        salt = _salt(parser, args.salt)
    try:
        if args.input == "-":
            data = sys.stdin.buffer.read()
        else:
            data = Path(args.input).read_bytes()
    except OSError as exc:
        print(f"error: cannot read {args.input}: {exc.strerror}", file=sys.stderr)
        return EXIT_FAIL
    if args.bits is not None and not 0 <= args.bits <= 8 * len(data):
        parser.error(f"--bits {args.bits} exceeds the {8 * len(data)} input bits")
    print(_digest(args.algorithm, data, salt, args.bits).hex())
    return EXIT_OK


def cmd_kat(args, parser) -> int:
    try:
        entries = read_kat(args.file)
    except KatFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as exc:
        print(f"error: cannot read {args.file}: {exc.strerror}", file=sys.stderr)
        return EXIT_FAIL
    if not entries:
        print(f"warning: {args.file} holds no entries", file=sys.stderr)
    failed = 0
    for e in entries:
        ok = _digest(args.algorithm, e.message, bit_length=e.bit_length) == e.md
        failed += not ok
        if not ok or not args.quiet:
            print(f"{'ok' if ok else 'FAIL'}  Len={e.bit_length} (line {e.lineno})")
    print(f"{len(entries) - failed}/{len(entries)} passed")
    return EXIT_OK if failed == 0 else EXIT_FAIL


def cmd_selftest(args, parser) -> int:
    results = run_selftest(seed=args.seed, samples=args.samples)
    for r in results:
        note = f"  {r.detail}" if r.detail else ""
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name}  cases={r.cases} seed={r.seed}{note}")
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def _fmt(x):
    return "n/a" if x is None else f"{x:.6f}"


def cmd_campaign(args, parser) -> int:
    try:
        config = CampaignConfig(
            algorithm=args.algorithm, model=args.model, persistence=args.persistence,
            count=args.count, seed=args.seed, messages=args.messages,
            max_message_bytes=args.max_message_bytes, max_bits=args.max_bits,
            include_unchecked=args.include_unchecked,
            include_comparators=args.include_comparators,
            include_finalization=args.include_finalization,
            flag_width=args.flag_width, parity=args.parity,
            batch_size=args.batch_size, jobs=args.jobs)
    except ValueError as exc:
        parser.error(str(exc))
    out = None
    if args.output is not None:
        try:
            out = open(args.output, "w")
        except OSError as exc:
            print(f"error: cannot write {args.output}: {exc.strerror}", file=sys.stderr)
            return EXIT_FAIL
    t0 = time.perf_counter()
    report = run_campaign(config)
    elapsed = time.perf_counter() - t0
    if out is not None:
        with out:
            out.write(report.to_json())
    print(f"{config.algorithm}: injected={report.injected} activated={report.activated} "
          f"effective={report.effective} detected={report.detected} missed={report.missed} "
          f"false_alarms={report.false_alarms}")
    print(f"coverage={_fmt(report.coverage)} "
          f"false_alarm_ratio={_fmt(report.false_alarm_ratio)} "
          f"false_alarm_ratio_activated={_fmt(report.false_alarm_ratio_activated)} "
          f"({elapsed:.1f}s)")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hashguard",
        description="ECHO-256 / Fugue-256 with predicted-signature fault detection.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hash", help="print the digest of a file or stdin")
    p.add_argument("algorithm", choices=ALGORITHMS)
    p.add_argument("input", nargs="?", default="-", help="input file (default: stdin)")
    p.add_argument("--salt", help="16-byte salt as hex (echo256 only; default all-zero)")
    p.add_argument("--bits", type=int, help="hash only the first BITS bits of the input")
    p.set_defaults(func=cmd_hash)

    p = sub.add_parser("kat", help="verify a Len/Msg/MD known-answer file")
    p.add_argument("algorithm", choices=ALGORITHMS)
    p.add_argument("file")
    p.add_argument("-q", "--quiet", action="store_true", help="only print failures")
    p.set_defaults(func=cmd_kat)

    p = sub.add_parser("selftest", help="run the signature identity suites")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--samples", type=int, default=10_000)
    p.set_defaults(func=cmd_selftest)

    p = sub.add_parser("campaign", help="run a stuck-at fault injection campaign")
    p.add_argument("algorithm", choices=ALGORITHMS)
    p.add_argument("--model", choices=MODELS, default="multiple")
    p.add_argument("--persistence", choices=PERSISTENCE, default="transient")
    p.add_argument("-n", "--count", type=int, default=1000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("-o", "--output", help="write the JSON report here")
    p.add_argument("--messages", type=int, default=8, help="size of the message corpus")
    p.add_argument("--max-message-bytes", type=int)
    p.add_argument("--max-bits", type=int, default=8,
                   help="largest multiplicity for the multiple-bit model")
    p.add_argument("--flag-width", type=int, default=32,
                   help="bits kept from each ECHO column flag")
    p.add_argument("--parity", choices=("word", "byte"), default="word")
    p.add_argument("--include-unchecked", action="store_true",
                   help="also inject at S-box outputs")
    p.add_argument("--include-comparators", action="store_true",
                   help="also inject into the error-indication flags")
    p.add_argument("--include-finalization", action="store_true",
                   help="also inject into Fugue's final rounds")
    p.add_argument("--batch-size", type=int, default=1024)
    p.add_argument("-j", "--jobs", type=int, default=1)
    p.set_defaults(func=cmd_campaign)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args, parser)


if __name__ == "__main__":
    sys.exit(main())
