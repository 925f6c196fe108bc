#! /usr/bin/env python3

import numpy as np
import polars as pl
import xml.etree.ElementTree as ET
from scipy.interpolate import CubicSpline
from pathlib import Path
from pydantic import BaseModel

from src.common.common import EPS_REG
from src.curve_core.curve_core import SampledCurve, from_points
from src.helicoidal.helicoidal import SurfaceMesh
from src.treadmill.treadmill import TSCurve


CURVE_COLUMNS = ['t', 'x', 'y']
F_OVERRIDE_COLUMNS = ['t', 'f']
CURVATURE_COLUMNS = ['s', 't', 'H', 'K']


def format_float(value: float) -> str:
    """
    17 significant digits reproduce any float64 exactly
    """
    return f'{value:.17g}'


def _write_columns(
    filepath: Path, colnames: list[str], columns: list[np.ndarray]):
    """
    Writes numeric columns as text so that the output does not depend on the
        float formatting of the CSV writer
    """

    assert len(colnames) == len(columns)
    assert len({len(e) for e in columns}) == 1

    df = pl.DataFrame({
        name: [format_float(v) for v in np.asarray(column, dtype=float)]
        for name, column in zip(colnames, columns)})

    Path(filepath).parent.mkdir(exist_ok=True, parents=True)
    df.write_csv(filepath)


def _read_columns(filepath: Path, colnames: list[str]) -> pl.DataFrame:
    """
    Reads a numeric CSV with exactly the header 'colnames'
    """

    # INPUT PRE-CHECKS
    ##################################################

    assert Path(filepath).stat().st_size > 0, f'{filepath}:  empty file'

    df = pl.read_csv(filepath, infer_schema_length=0)

    assert df.columns == colnames, (
        f'{filepath}:  expected header {",".join(colnames)}, '
        f'found {",".join(df.columns)}')
    assert len(df) > 0, f'{filepath}:  no samples'


    return df.with_columns(pl.all().cast(pl.Float64))


def write_curve_csv(filepath: Path, params: np.ndarray, points: np.ndarray):

    assert points.shape == (len(params), 2)

    _write_columns(
        filepath, CURVE_COLUMNS, [params, points[:, 0], points[:, 1]])


def read_curve_csv(filepath: Path) -> tuple[np.ndarray, np.ndarray]:
    """
    Reads a curve CSV with header 't,x,y'; returns the parameters and the
        (n, 2) array of points
    """

    df = _read_columns(filepath, CURVE_COLUMNS)
    params = df['t'].to_numpy()
    points = np.column_stack((df['x'].to_numpy(), df['y'].to_numpy()))

    return params, points


def write_sampled_curve(filepath: Path, c: SampledCurve):
    write_curve_csv(filepath, c.params, c.points)


def read_sampled_curve(
    filepath: Path, eps_reg: float = EPS_REG) -> SampledCurve:

    params, points = read_curve_csv(filepath)
    assert len(params) >= 4, f'{filepath}:  at least 4 samples are required'

    return from_points(params, points, eps_reg)


def write_ts_curve(filepath: Path, g: TSCurve):
    write_curve_csv(filepath, g.params, g.zw)


def read_ts_curve(filepath: Path) -> TSCurve:

    params, points = read_curve_csv(filepath)
    assert len(params) >= 4, f'{filepath}:  at least 4 samples are required'

    velocity = CubicSpline(params, points, axis=0)(params, 1)

    return TSCurve(params=params, zw=points, velocity=velocity)


def read_f_override(filepath: Path, params: np.ndarray) -> np.ndarray:
    """
    Reads companion-function values from a CSV with header 't,f'; the parameter
        column must match 'params'
    """

    df = _read_columns(filepath, F_OVERRIDE_COLUMNS)
    t = df['t'].to_numpy()

    assert len(t) == len(params), (
        f'{filepath}:  {len(t)} values of f for {len(params)} samples')
    assert np.allclose(t, params, rtol=0, atol=1e-12), (
        f'{filepath}:  parameters do not match the curve')

    return df['f'].to_numpy()


def write_curvature_csv(
    filepath: Path, mesh: SurfaceMesh, H: np.ndarray, K: np.ndarray):
    """
    One row per grid node (s-major order) with header 's,t,H,K'; boundary nodes
        carry NaN
    """

    shape = (len(mesh.s_params), len(mesh.t_params))
    assert H.shape == shape
    assert K.shape == shape

    s_grid, t_grid = np.meshgrid(mesh.s_params, mesh.t_params, indexing='ij')

    _write_columns(
        filepath, CURVATURE_COLUMNS,
        [s_grid.ravel(), t_grid.ravel(), H.ravel(), K.ravel()])


def write_mesh_obj(filepath: Path, mesh: SurfaceMesh):
    """
    Wavefront-style text:  one 'v x y z' line per grid node (s-major order),
        each grid quad split into two triangles ordered counterclockwise as
        seen from phi_s x phi_t
    """

    ns, nt = len(mesh.s_params), len(mesh.t_params)

    lines = [
        'v ' + ' '.join(format_float(c) for c in e)
        for e in mesh.points.reshape(-1, 3)]

    # OBJ vertex indices are 1-based
    def index(i: int, j: int) -> int:
        return i * nt + j + 1

    for i in range(ns - 1):
        for j in range(nt - 1):
            a, b = index(i, j), index(i + 1, j)
            c, d = index(i + 1, j + 1), index(i, j + 1)
            lines.append(f'f {a} {b} {c}')
            lines.append(f'f {a} {c} {d}')

    Path(filepath).parent.mkdir(exist_ok=True, parents=True)
    with open(filepath, 'w', encoding='utf-8') as obj_file:
        obj_file.write('\n'.join(lines) + '\n')


def write_sidecar(filepath: Path, report: BaseModel):
    Path(filepath).parent.mkdir(exist_ok=True, parents=True)
    with open(filepath, 'w', encoding='utf-8') as json_file:
        json_file.write(report.model_dump_json(indent=2))


def emit_svg(
    curves: list[np.ndarray], filepath: Path,
    colors: tuple[str, ...] = (
        '#1f77b4', '#d62728', '#2ca02c', '#9467bd', '#ff7f0e'),
    size: int = 600):
    """
    Draws each (n, 2) array as a polyline in a common, equal-aspect view box
        with the coordinate axes; y points up
    """


    # INPUT PRE-CHECKS
    ##################################################

    assert len(curves) > 0, 'no curves to plot'
    for e in curves:
        assert e.ndim == 2 and e.shape[1] == 2 and len(e) > 0


    # VIEW BOX
    ##################################################

    stacked = np.concatenate(list(curves) + [np.zeros((1, 2))])
    lower = stacked.min(axis=0)
    upper = stacked.max(axis=0)
    extent = max(float(np.max(upper - lower)), 1e-9)
    margin = 0.05 * extent
    lower = lower - margin
    upper = lower + extent + 2 * margin
    width = float(upper[0] - lower[0])

    root = ET.Element(
        'svg', xmlns='http://www.w3.org/2000/svg',
        width=str(size), height=str(size),
        viewBox=f'{lower[0]:.6g} {-upper[1]:.6g} {width:.6g} {width:.6g}')

    # flipping y keeps the mathematical orientation
    group = ET.SubElement(root, 'g', transform='scale(1,-1)')
    stroke = f'{width / size:.6g}'


    # AXES AND CURVES
    ##################################################

    for x1, y1, x2, y2 in (
        (lower[0], 0, upper[0], 0), (0, lower[1], 0, upper[1])):
        ET.SubElement(
            group, 'line', x1=f'{x1:.6g}', y1=f'{y1:.6g}', x2=f'{x2:.6g}',
            y2=f'{y2:.6g}', stroke='#999999', attrib={'stroke-width': stroke})

    for i, e in enumerate(curves):
        ET.SubElement(
            group, 'polyline',
            points=' '.join(f'{x:.6g},{y:.6g}' for x, y in e),
            fill='none', stroke=colors[i % len(colors)],
            attrib={'stroke-width': f'{2 * width / size:.6g}'})

    Path(filepath).parent.mkdir(exist_ok=True, parents=True)
    ET.ElementTree(root).write(filepath, encoding='utf-8', xml_declaration=True)
