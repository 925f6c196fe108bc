#! /usr/bin/env python3

import os
import sys
import json
import time
import argparse
import logging
import logging.config
import numpy as np
import polars as pl
from pathlib import Path
from typing import Literal, Optional
from pydantic import BaseModel, Field, ValidationError, model_validator

from src.common.common import (
    DELTA_POS,
    EPS_AXIS,
    EPS_REG,
    TreadmillNumericError,
    seconds_to_formatted_time_string,
    )
from src.generators.generators import (
    CMCSpec,
    FlatSpec,
    MinimalSpec,
    cmc_profile,
    flat_profile,
    minimal_profile,
    profile_report,
    )
from src.helicoidal.helicoidal import (
    HelicoidalParams,
    curvature_report,
    curvatures_fd,
    immerse,
    )
from src.inverse_ts.inverse_ts import invert
from src.io_cli.curve_io import (
    emit_svg,
    read_curve_csv,
    read_f_override,
    read_sampled_curve,
    read_ts_curve,
    write_curvature_csv,
    write_curve_csv,
    write_mesh_obj,
    write_sampled_curve,
    write_sidecar,
    write_ts_curve,
    )
from src.io_cli.set_up_log_configuration import LOG_CONFIG_FILEPATH
from src.roll.roll import roll
from src.treadmill.treadmill import phi_ts, ts


logger = logging.getLogger('treadmill')


EXIT_SUCCESS = 0
EXIT_VALIDATION = 2
EXIT_NUMERIC = 3

Command = Literal[
    'ts', 'phi-ts', 'invert', 'roll', 'gen-minimal', 'gen-cmc', 'gen-flat',
    'mesh', 'verify', 'plot']

# commands that read a curve from '--in'
INPUT_COMMANDS = ('ts', 'phi-ts', 'invert', 'roll', 'mesh', 'verify', 'plot')
# commands that must write to '--out'
OUTPUT_COMMANDS = (
    'ts', 'phi-ts', 'invert', 'roll', 'gen-minimal', 'gen-cmc', 'gen-flat',
    'mesh', 'plot')


class RunConfig(BaseModel):
    """
    Options shared by all subcommands; 'n' left unset means the default of the
        chosen generator
    """
    command: Command
    in_paths: list[Path] = []
    out_path: Optional[Path] = None
    w: float = Field(gt=0, default=1.)
    M: float = 0.
    n: Optional[int] = Field(ge=4, default=None)
    nt: int = Field(ge=3, default=200)
    eps_reg: float = Field(gt=0, default=EPS_REG)
    eps_axis: float = Field(gt=0, default=EPS_AXIS)
    delta_pos: float = Field(ge=0, default=DELTA_POS)
    seed: int = Field(ge=0, default=0)
    f_override: Optional[Path] = None

    @model_validator(mode='after')
    def check_paths(self) -> 'RunConfig':
        if self.command in INPUT_COMMANDS:
            assert self.in_paths, f'{self.command} requires --in'
            assert all(str(e) for e in self.in_paths), 'empty input path'
        if self.command in OUTPUT_COMMANDS:
            assert self.out_path is not None and str(self.out_path), (
                f'{self.command} requires --out')
        return self

    @property
    def in_path(self) -> Path:
        return self.in_paths[0]


def provide_argument_parser() -> argparse.ArgumentParser:

    parser = argparse.ArgumentParser(
        prog='treadmill',
        description=(
            'TreadmillSled of planar curves, its inverse, the Roll operator '
            'and profile curves of helicoidal surfaces'))
    subparsers = parser.add_subparsers(dest='command', required=True)

    def add_common(subparser: argparse.ArgumentParser):
        subparser.add_argument('--out', type=Path, default=None)
        subparser.add_argument('--eps-reg', type=float, default=EPS_REG)
        subparser.add_argument('--seed', type=int, default=0)

    def add_input(subparser: argparse.ArgumentParser, nargs: int | str = 1):
        subparser.add_argument(
            '--in', dest='in_paths', type=Path, nargs=nargs,
            required=True)

    for command in ('ts', 'roll'):
        subparser = subparsers.add_parser(command)
        add_input(subparser)
        add_common(subparser)

    subparser = subparsers.add_parser('phi-ts')
    add_input(subparser)
    add_common(subparser)
    subparser.add_argument(
        '--phi', type=float, default=0., help='constant treadmill inclination')

    subparser = subparsers.add_parser('invert')
    add_input(subparser)
    add_common(subparser)
    subparser.add_argument('--f-override', type=Path, default=None)
    subparser.add_argument(
        '--offset', type=float, default=0.,
        help='constant added to the antiderivative of f')
    subparser.add_argument('--eps-axis', type=float, default=EPS_AXIS)
    subparser.add_argument('--delta-pos', type=float, default=DELTA_POS)

    subparser = subparsers.add_parser('gen-minimal')
    add_common(subparser)
    subparser.add_argument('--w', type=float, default=1.)
    subparser.add_argument('--M', type=float, default=0.)
    subparser.add_argument('--n', type=int, default=None)
    subparser.add_argument(
        '--branch', choices=('upper', 'lower'), default='upper')
    subparser.add_argument('--s-span', type=float, default=4.)
    subparser.add_argument('--sidecar', type=Path, default=None)

    subparser = subparsers.add_parser('gen-cmc')
    add_common(subparser)
    subparser.add_argument('--w', type=float, default=1.)
    subparser.add_argument('--M', type=float, default=0.)
    subparser.add_argument('--n', type=int, default=None)
    subparser.add_argument('--sidecar', type=Path, default=None)

    subparser = subparsers.add_parser('gen-flat')
    add_common(subparser)
    subparser.add_argument('--c', type=float, required=True)
    subparser.add_argument('--y-start', type=float, required=True)
    subparser.add_argument('--y-end', type=float, required=True)
    subparser.add_argument(
        '--w', type=float, default=1., help='pitch used in the sidecar report')
    subparser.add_argument('--n', type=int, default=None)
    subparser.add_argument('--sidecar', type=Path, default=None)

    subparser = subparsers.add_parser('mesh')
    add_input(subparser)
    add_common(subparser)
    subparser.add_argument('--w', type=float, default=1.)
    subparser.add_argument('--nt', type=int, default=200)
    subparser.add_argument(
        '--t-range', type=float, nargs=2, default=(0., 1.))
    subparser.add_argument('--curvature-out', type=Path, default=None)

    subparser = subparsers.add_parser('verify')
    add_input(subparser)
    add_common(subparser)
    subparser.add_argument('--w', type=float, default=1.)
    subparser.add_argument('--nt', type=int, default=200)
    subparser.add_argument(
        '--t-range', type=float, nargs=2, default=(0., 1.))
    subparser.add_argument('--probes', type=int, default=100)

    subparser = subparsers.add_parser('plot')
    add_input(subparser, nargs='+')
    add_common(subparser)
    subparser.add_argument(
        '--with-ts', action='store_true',
        help='also draw the TreadmillSled of every input curve')

    return parser


def build_run_config(args: argparse.Namespace) -> RunConfig:

    fields = {
        'command': args.command,
        'in_paths': getattr(args, 'in_paths', None) or [],
        'out_path': args.out,
        'eps_reg': args.eps_reg,
        'seed': args.seed}

    for name in ('w', 'M', 'n', 'nt', 'eps_axis', 'delta_pos', 'f_override'):
        if getattr(args, name, None) is not None:
            fields[name] = getattr(args, name)

    return RunConfig(**fields)


def set_up_logging(log_config_filepath: Path = LOG_CONFIG_FILEPATH):
    """
    Applies the JSON logging configuration; the environment variable
        'TREADMILL_LOG' (debug or info) overrides the configured level
    """

    with open(log_config_filepath) as json_file:
        log_configuration = json.load(json_file)

    level = os.environ.get('TREADMILL_LOG', '').upper()
    if level in ('DEBUG', 'INFO'):
        log_configuration['loggers']['treadmill']['level'] = level

    logging.config.dictConfig(log_configuration)


def run_command(config: RunConfig, args: argparse.Namespace):
    """
    Executes one subcommand; errors propagate to 'main'
    """

    command = config.command
    p = HelicoidalParams(w=config.w)

    if command == 'ts':
        c = read_sampled_curve(config.in_path, config.eps_reg)
        write_ts_curve(config.out_path, ts(c))

    elif command == 'phi-ts':
        c = read_sampled_curve(config.in_path, config.eps_reg)
        phi = np.full(len(c), args.phi)
        write_ts_curve(config.out_path, phi_ts(c, phi))

    elif command == 'invert':
        g = read_ts_curve(config.in_path)
        f = None
        if config.f_override is not None:
            f = read_f_override(config.f_override, g.params)
        result = invert(
            g, f=f, antiderivative_offset=args.offset,
            delta_pos=config.delta_pos, eps_axis=config.eps_axis)
        write_sampled_curve(config.out_path, result.alpha)

    elif command == 'roll':
        c = read_sampled_curve(config.in_path, config.eps_reg)
        trace = roll(c)
        write_curve_csv(config.out_path, trace.params, trace.points)

    elif command in ('gen-minimal', 'gen-cmc', 'gen-flat'):

        sizing = {} if config.n is None else {'n': config.n}
        if command == 'gen-minimal':
            spec = MinimalSpec(
                p=p, M=config.M, branch=args.branch, s_span=args.s_span,
                **sizing)
            profile = minimal_profile(spec)
        elif command == 'gen-cmc':
            spec = CMCSpec(p=p, M=config.M, **sizing)
            profile = cmc_profile(spec)
        else:
            spec = FlatSpec(
                c=args.c, y_start=args.y_start, y_end=args.y_end, **sizing)
            profile = flat_profile(spec)

        write_sampled_curve(config.out_path, profile)
        if args.sidecar is not None:
            write_sidecar(args.sidecar, profile_report(spec, profile, config.w))

    elif command == 'mesh':
        profile = read_sampled_curve(config.in_path, config.eps_reg)
        mesh = immerse(profile, p, tuple(args.t_range), config.nt)
        write_mesh_obj(config.out_path, mesh)
        if args.curvature_out is not None:
            H, K = curvatures_fd(mesh)
            write_curvature_csv(args.curvature_out, mesh, H, K)

    elif command == 'verify':
        profile = read_sampled_curve(config.in_path, config.eps_reg)
        report = curvature_report(
            profile, p, nt=config.nt, t_range=tuple(args.t_range),
            seed=config.seed, n_probe=args.probes)
        if config.out_path is not None:
            write_sidecar(config.out_path, report)
        print(report.model_dump_json(indent=2))

    elif command == 'plot':
        curves = []
        for e in config.in_paths:
            _, points = read_curve_csv(e)
            curves.append(points)
            if args.with_ts:
                curves.append(ts(read_sampled_curve(e, config.eps_reg)).zw)
        emit_svg(curves, config.out_path)


def main(argv: Optional[list[str]] = None) -> int:
    """
    Command-line entry point; returns the exit status:  0 on success, 2 on
        validation errors and 3 on numeric errors
    """

    args = provide_argument_parser().parse_args(argv)
    set_up_logging()

    start_time = time.time()

    try:
        config = build_run_config(args)
        run_command(config, args)

    except TreadmillNumericError as e:
        print(f'{type(e).__name__}: {e}', file=sys.stderr)
        return EXIT_NUMERIC

    except (
        AssertionError, ValidationError, FileNotFoundError,
        pl.exceptions.PolarsError) as e:
        message = str(e).splitlines()[0] if str(e) else type(e).__name__
        print(f'validation error: {message}', file=sys.stderr)
        return EXIT_VALIDATION

    elapsed_time = seconds_to_formatted_time_string(time.time() - start_time)
    logger.info(f'{args.command} finished in {elapsed_time}')

    return EXIT_SUCCESS


if __name__ == '__main__':
    sys.exit(main())
