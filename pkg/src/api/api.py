#! /usr/bin/env python3

import logging
import numpy as np
from fastapi import FastAPI
from pydantic import BaseModel, Field, model_validator
from typing import Optional

from src.common.common import TreadmillNumericError
from src.curve_core.curve_core import from_points
from src.helicoidal.helicoidal import (
    CurvatureReport,
    HelicoidalParams,
    curvature_report,
    )
from src.inverse_ts.inverse_ts import invert
from src.io_cli.cli import set_up_logging
from src.treadmill.treadmill import TSCurve, ts


# the service shares the logging configuration of the command line
set_up_logging()
logger = logging.getLogger('treadmill')


class CurvePayload(BaseModel):
    t: list[float] = Field(min_length=4)
    x: list[float]
    y: list[float]

    @model_validator(mode='after')
    def check_lengths(self) -> 'CurvePayload':
        assert len(self.x) == len(self.t), 'x and t differ in length'
        assert len(self.y) == len(self.t), 'y and t differ in length'
        return self


class TSPayload(BaseModel):
    t: list[float] = Field(min_length=4)
    z: list[float]
    w: list[float]
    # companion function; required when the curve is a single point
    f: Optional[list[float]] = None
    antiderivative_offset: float = 0.

    @model_validator(mode='after')
    def check_lengths(self) -> 'TSPayload':
        assert len(self.z) == len(self.t), 'z and t differ in length'
        assert len(self.w) == len(self.t), 'w and t differ in length'
        if self.f is not None:
            assert len(self.f) == len(self.t), 'f and t differ in length'
        return self


class VerifyPayload(BaseModel):
    profile: CurvePayload
    w: float = Field(gt=0, default=1.)
    nt: int = Field(ge=3, le=1000, default=200)
    seed: int = Field(ge=0, default=0)
    probes: int = Field(ge=0, default=100)


class TSResponse(BaseModel):
    valid_response: bool
    t: list[float] = []
    z: list[float] = []
    w: list[float] = []
    error_message: str = ''


class InvertResponse(BaseModel):
    valid_response: bool
    t: list[float] = []
    x: list[float] = []
    y: list[float] = []
    speed: list[float] = []
    error_message: str = ''


class VerifyResponse(BaseModel):
    valid_response: bool
    report: Optional[CurvatureReport] = None
    error_message: str = ''


def describe_error(e: Exception) -> str:
    return f'{type(e).__name__}: {e}'


app = FastAPI()


@app.post('/ts', response_model=TSResponse)
def post_ts(curve: CurvePayload) -> TSResponse:
    """
    TreadmillSled of a sampled curve; derivatives come from the cubic spline
        through the samples
    """

    try:
        c = from_points(np.array(curve.t), np.column_stack((curve.x, curve.y)))
        g = ts(c)
    except (AssertionError, TreadmillNumericError) as e:
        logger.info(describe_error(e))
        return TSResponse(valid_response=False, error_message=describe_error(e))

    return TSResponse(
        valid_response=True, t=g.params.tolist(), z=g.z.tolist(),
        w=g.w.tolist())


@app.post('/invert', response_model=InvertResponse)
def post_invert(curve: TSPayload) -> InvertResponse:
    """
    Reconstructs a curve whose TreadmillSled is the given (z, w) curve
    """

    try:
        g = TSCurve(
            params=np.array(curve.t), zw=np.column_stack((curve.z, curve.w)))
        f = None if curve.f is None else np.array(curve.f)
        result = invert(
            g, f=f, antiderivative_offset=curve.antiderivative_offset)
    except (AssertionError, TreadmillNumericError) as e:
        logger.info(describe_error(e))
        return InvertResponse(
            valid_response=False, error_message=describe_error(e))

    alpha = result.alpha

    return InvertResponse(
        valid_response=True, t=alpha.params.tolist(),
        x=alpha.points[:, 0].tolist(), y=alpha.points[:, 1].tolist(),
        speed=result.speed.tolist())


@app.post('/verify', response_model=VerifyResponse)
def post_verify(payload: VerifyPayload) -> VerifyResponse:
    """
    Curvature report of the helicoidal surface with the given profile
    """

    profile = payload.profile

    try:
        c = from_points(
            np.array(profile.t), np.column_stack((profile.x, profile.y)))
        report = curvature_report(
            c, HelicoidalParams(w=payload.w), nt=payload.nt,
            seed=payload.seed, n_probe=payload.probes)
    except (AssertionError, TreadmillNumericError) as e:
        logger.info(describe_error(e))
        return VerifyResponse(
            valid_response=False, error_message=describe_error(e))

    return VerifyResponse(valid_response=True, report=report)
