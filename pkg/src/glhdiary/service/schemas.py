"""Pydantic request/response models for the survey service."""

from __future__ import annotations

from pydantic import BaseModel, Field, model_validator

from ..diary import Employment, Gender, IncomeBand, WorkplaceArrangement


class RespondentIn(BaseModel):
    respondent_id: str | None = None  # generated when omitted
    age: int = Field(ge=18)
    gender: Gender
    household_size: int = Field(ge=1)
    employment: Employment
    workplace_arrangement: WorkplaceArrangement
    income_band: IncomeBand
    home_lat: float | None = None
    home_lon: float | None = None
    setup_confirmed: bool = True


class RespondentOut(BaseModel):
    respondent_id: str
    phase: str


class ValidationItem(BaseModel):
    event_index: int
    purpose: str | None = None
    mode_response: str | None = None

    @model_validator(mode="after")
    def _exactly_one(self) -> "ValidationItem":
        if (self.purpose is None) == (self.mode_response is None):
            raise ValueError("exactly one of purpose / mode_response must be set")
        return self


class StatusOut(BaseModel):
    respondent_id: str
    phase: str
    days: list[str]
    activities: int
    trip_legs: int
    validated_activities: int
    validated_trip_legs: int


class OptionsOut(BaseModel):
    purposes: list[str]
    mode_responses: list[str]


class ErrorBody(BaseModel):
    code: str
    message: str
    detail: str | None = None
