"""``ftgi`` command line entry point.

Exit status: 0 on success, 1 for an invalid configuration or arguments,
2 when a run's built-in check fails (e.g. an FDM bit mismatch).
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import experiments as ex
from .config import ConfigError, ExperimentConfig, _floats, _ints, _strs, load_config

log = logging.getLogger("ftgi")

EXIT_OK, EXIT_CONFIG, EXIT_CHECK = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _common(p):
    p.add_argument("--config", metavar="PATH", help="key=value configuration file")
    p.add_argument("--out", metavar="DIR", help="output directory")
    p.add_argument("--seed", type=int, help="detector / probe seed")
    p.add_argument("--coverage", metavar="LIST", help="comma-separated coverage fractions")
    p.add_argument("--noise-sigma", type=float, help="additive Gaussian read noise")
    p.add_argument("--quantize", type=int, help="probe grayscale levels (e.g. 256)")
    p.add_argument("--plot", dest="plot", action="store_true", default=None, help="write SVG figures")
    p.add_argument("--no-plot", dest="plot", action="store_false", help="skip SVG figures")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ftgi", description="Fourier temporal ghost imaging experiments")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("sine-demo", help="sinusoid objects: capture, spectrum, ghost image")
    p.add_argument("--freqs", help="object frequencies in Hz, e.g. 11,33,55,88")

    p = sub.add_parser("wave", help="square / sawtooth / pulse object")
    p.add_argument("--shape", choices=["square", "sawtooth", "pulse"])
    p.add_argument("--freq", type=float)
    p.add_argument("--duty", type=float)

    p = sub.add_parser("word", help="binary word in a line code")
    p.add_argument("--bits")
    p.add_argument("--scheme", choices=["nrz-square", "rz-square", "rz-gauss"])
    p.add_argument("--bit-rate", type=float)

    p = sub.add_parser("sweep-coverage", help="PSNR against spectrum coverage")
    p.add_argument("--shapes", help="comma-separated shapes")
    p.add_argument("--freqs", help="comma-separated frequencies in Hz")

    p = sub.add_parser("compare-tgi", help="FTGI against random-probing TGI")
    p.add_argument("--budgets", help="measurement fractions, e.g. 0.5,0.75,1")
    p.add_argument("--seeds", help="seed list or range, e.g. 0-19")

    p = sub.add_parser("fdm", help="two-channel FDM decoding")
    p.add_argument("--bit-rates", help="bit rates, e.g. 5,10")
    p.add_argument("--schemes", help="line codes, e.g. rz-square,rz-gauss")
    p.add_argument("--words", help="one word per channel, comma-separated")

    p = sub.add_parser("reconstruct", help="reconstruct a saved capture CSV")
    p.add_argument("capture", help="capture CSV written by another run")

    p = sub.add_parser("frames", help="dump probe frames")
    p.add_argument("--frames", default="0", help="frame indices or ranges, e.g. 0-3,200")
    p.add_argument("--format", choices=["csv", "pgm"], default="csv")

    for p in sub.choices.values():
        _common(p)
    return parser


def resolve_config(args) -> ExperimentConfig:
    config = load_config(args.config) if args.config else ExperimentConfig()
    overrides = {
        "out": args.out,
        "seed": args.seed,
        "noise_sigma": args.noise_sigma,
        "quantize": args.quantize,
        "plot": args.plot,
        "coverage": _floats(args.coverage) if args.coverage else None,
    }
    command_overrides = {
        "sine-demo": {"freqs": lambda: _floats(args.freqs) if args.freqs else None},
        "wave": {"shape": lambda: args.shape, "freq": lambda: args.freq, "duty": lambda: args.duty},
        "word": {"bits": lambda: args.bits, "scheme": lambda: args.scheme,
                 "bit_rate": lambda: args.bit_rate},
        "sweep-coverage": {"shapes": lambda: _strs(args.shapes) if args.shapes else None,
                           "sweep_freqs": lambda: _floats(args.freqs) if args.freqs else None},
        "compare-tgi": {"budgets": lambda: _floats(args.budgets) if args.budgets else None,
                        "seeds": lambda: _ints(args.seeds) if args.seeds else None},
        "fdm": {"fdm_bit_rates": lambda: _floats(args.bit_rates) if args.bit_rates else None,
                "fdm_schemes": lambda: _strs(args.schemes) if args.schemes else None,
                "fdm_words": lambda: _strs(args.words) if args.words else None},
    }
    for name, get in command_overrides.get(args.command, {}).items():
        overrides[name] = get()
    for name, value in overrides.items():
        if value is not None:
            setattr(config, name, value)
    if args.command == "compare-tgi" and args.seed is not None and not args.seeds:
        config.seeds = [args.seed]
    return config


def run(args) -> ex.RunResult:
    config = resolve_config(args)
    command = args.command
    if command == "sine-demo":
        return ex.run_sine_demo(config)
    if command == "wave":
        return ex.run_wave(config)
    if command == "word":
        return ex.run_word(config)
    if command == "sweep-coverage":
        return ex.run_coverage_sweep(config)
    if command == "compare-tgi":
        return ex.run_compare(config)
    if command == "fdm":
        return ex.run_fdm(config)
    if command == "reconstruct":
        return ex.run_reconstruct(config, args.capture)
    return ex.run_frames(config, _ints(args.frames), args.format)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        result = run(args)
    except ex.AcceptanceError as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    log.info("wrote %d files to %s", len(result.files), result.out_dir)
    print(f"{args.command}: {len(result.files)} artifacts in {result.out_dir}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
