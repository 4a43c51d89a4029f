"""HTTP service: auth, classes, inquiries, photos, analytics, device gateway.

Each endpoint delegates to the store operation of the same name inside one
transaction; error translation is uniform (401 bad token, 403 role, 404
unknown, 409 state, 410 expired code, 422 validation).
"""

from __future__ import annotations

import json
from typing import Optional

from fastapi import Depends, FastAPI, Header, HTTPException, Query, Request, Response
from fastapi.responses import JSONResponse, StreamingResponse
from pydantic import BaseModel, Field

from senselab.analytics import compute_report, weekly_activity
from senselab.core import (
    AuthorizationError,
    DomainError,
    ExpiredCodeError,
    Inquiry,
    NotFoundError,
    StateError,
    UserAccount,
    ValidationError,
    inquiry_to_dict,
)
from senselab.protocol import Measurement, SensorType
from senselab.scoring import score_inquiry

from .db import PlatformDB
from .gateway import STREAM_END, DeviceGateway, UnknownDeviceError


class RegisterBody(BaseModel):
    username: str
    password: str
    role: str = "student"


class LoginBody(BaseModel):
    username: str
    password: str


class ClassBody(BaseModel):
    name: str


class InquiryBody(BaseModel):
    class_id: str
    sensor_type: str
    title: str = ""
    description: str = ""
    notes: str = ""


class InquiryPatch(BaseModel):
    title: Optional[str] = None
    description: Optional[str] = None
    notes: Optional[str] = None


class MeasurementBody(BaseModel):
    sensor_type: str
    timestamp_ms: int = 0
    values: list[float]


class DataPointBody(BaseModel):
    measurement: MeasurementBody
    label: str = ""
    photo_ref: Optional[str] = None


class CommentBody(BaseModel):
    body: str


class OverrideBody(BaseModel):
    category: str
    reason: str


class FaultBody(BaseModel):
    fault: str = Field(pattern="^(mute|corrupt_crc|slow)$")


def _error_response(status: int, code: str, message: str,
                    fields: list[str] | None = None) -> JSONResponse:
    payload = {"error": code, "detail": message}
    if fields:
        payload["fields"] = fields
    return JSONResponse(status_code=status, content=payload)


def _token_payload(db: PlatformDB, user: UserAccount) -> dict:
    session = db.issue_token(user.id)
    return {
        "token": session.token,
        "user_id": user.id,
        "username": user.username,
        "role": user.role.value,
        "expires_at": session.expires_at.isoformat(),
    }


def _inquiry_payload(inquiry: Inquiry) -> dict:
    data = inquiry_to_dict(inquiry)
    score = score_inquiry(inquiry)
    data["score"] = {
        "category": score.category.wire_name,
        "evidence": list(score.evidence),
        "overridden": score.overridden,
    }
    return data


def create_app(db: PlatformDB, gateway: DeviceGateway | None = None) -> FastAPI:
    app = FastAPI(title="senselab service", version="0.1.0")
    gateway = gateway or DeviceGateway(None)

    # -- uniform domain error translation ------------------------------------

    @app.exception_handler(DomainError)
    async def handle_domain_error(request: Request, exc: DomainError):
        if isinstance(exc, ValidationError):
            return _error_response(422, exc.code, str(exc), exc.fields)
        if isinstance(exc, NotFoundError):
            return _error_response(404, exc.code, str(exc))
        if isinstance(exc, ExpiredCodeError):
            return _error_response(410, exc.code, str(exc))
        if isinstance(exc, StateError):
            return _error_response(409, exc.code, str(exc))
        if isinstance(exc, AuthorizationError):
            return _error_response(403, exc.code, str(exc))
        return _error_response(400, exc.code, str(exc))

    @app.exception_handler(UnknownDeviceError)
    async def handle_unknown_device(request: Request, exc: UnknownDeviceError):
        return _error_response(404, "not_found", str(exc))

    # -- auth ---------------------------------------------------------------------

    def current_user(authorization: Optional[str] = Header(None)) -> UserAccount:
        if not authorization or not authorization.startswith("Bearer "):
            raise HTTPException(401, "missing bearer token")
        try:
            return db.resolve_token(authorization.removeprefix("Bearer ").strip())
        except AuthorizationError as exc:
            raise HTTPException(401, str(exc)) from None

    @app.post("/auth/register", status_code=201)
    def register(body: RegisterBody):
        if body.role not in ("teacher", "student"):
            raise ValidationError("role must be teacher or student", ["role"])
        user = db.create_user(body.username, body.password, body.role)
        return _token_payload(db, user)

    @app.post("/auth/login")
    def login(body: LoginBody):
        user = db.authenticate(body.username, body.password)
        return _token_payload(db, user)

    # -- classes ------------------------------------------------------------------

    @app.post("/classes", status_code=201)
    def create_class(body: ClassBody, user: UserAccount = Depends(current_user)):
        group = db.create_class(user.id, body.name)
        return {
            "id": group.id, "name": group.name, "join_code": group.join_code,
            "teacher_id": group.teacher_id,
        }

    @app.post("/classes/{code}/join")
    def join_class(code: str, user: UserAccount = Depends(current_user)):
        group = db.join_class(user.id, code)
        return {"class_id": group.id, "name": group.name}

    @app.post("/classes/{class_id}/regenerate_code")
    def regenerate_code(class_id: str, user: UserAccount = Depends(current_user)):
        group = db.regenerate_join_code(user.id, class_id)
        return {"id": group.id, "join_code": group.join_code}

    def _class_events_and_inquiries(class_id: str):
        db.get_class(class_id)
        class_inquiries = [
            i for i in db.all_inquiries(include_exemplars=False)
            if i.class_id == class_id
        ]
        exemplars = db.list_exemplars()
        ids = {i.id for i in class_inquiries}
        members = db.members_of(class_id)
        events = [
            e for e in db.events()
            if e.subject_id in ids
            or (e.kind.value == "session_start" and e.actor_id in members)
        ]
        all_ids = {i.id for i in db.all_inquiries()}
        return events, class_inquiries + exemplars, all_ids

    @app.get("/classes/{class_id}/report")
    def class_report(class_id: str, user: UserAccount = Depends(current_user)):
        events, inquiries, all_ids = _class_events_and_inquiries(class_id)
        report = compute_report(events, inquiries, known_ids=all_ids)
        return report.to_dict()

    @app.get("/classes/{class_id}/activity")
    def class_activity(class_id: str, user: UserAccount = Depends(current_user)):
        events, _, _ = _class_events_and_inquiries(class_id)
        return {
            "weekly_activity": [
                {"week_start": b.start.isoformat(), "events": b.events}
                for b in weekly_activity(events)
            ]
        }

    @app.get("/report")
    def platform_report(user: UserAccount = Depends(current_user)):
        report = compute_report(db.events(), db.all_inquiries())
        return report.to_dict()

    # -- inquiries -------------------------------------------------------------------

    @app.post("/inquiries", status_code=201)
    def create_inquiry(body: InquiryBody, user: UserAccount = Depends(current_user)):
        inquiry = db.create_inquiry(
            user.id, body.class_id, body.sensor_type,
            title=body.title, description=body.description, notes=body.notes,
        )
        return _inquiry_payload(inquiry)

    @app.get("/inquiries")
    def discover(
        user: UserAccount = Depends(current_user),
        sensor: Optional[str] = None,
        status: str = "published",
        class_id: Optional[str] = Query(None),
        cursor: Optional[str] = None,
        limit: int = Query(20, ge=1, le=100),
        mine: bool = False,
    ):
        if mine:
            items = [
                i for i in db.all_inquiries(include_exemplars=False)
                if i.author_id == user.id
            ]
            items.sort(key=lambda i: (i.created_at, i.id), reverse=True)
            return {
                "items": [_inquiry_payload(i) for i in items],
                "next_cursor": None,
                "total": len(items),
            }
        if status != "published":
            raise ValidationError("only status=published can be listed", ["status"])
        page = db.discover(sensor_type=sensor, class_id=class_id,
                           cursor=cursor, limit=limit)
        return {
            "items": [_inquiry_payload(i) for i in page.items],
            "next_cursor": page.next_cursor,
            "total": page.total,
        }

    @app.get("/exemplars")
    def exemplars(user: UserAccount = Depends(current_user),
                  sensor: Optional[str] = None):
        sensor_type = SensorType.from_wire_name(sensor) if sensor else None
        return {
            "items": [_inquiry_payload(i) for i in db.list_exemplars(sensor_type)]
        }

    @app.get("/inquiries/{inquiry_id}")
    def get_inquiry(inquiry_id: str, user: UserAccount = Depends(current_user)):
        return _inquiry_payload(db.get_inquiry(user.id, inquiry_id))

    @app.patch("/inquiries/{inquiry_id}")
    def update_inquiry(inquiry_id: str, body: InquiryPatch,
                       user: UserAccount = Depends(current_user)):
        inquiry = db.update_inquiry_text(
            user.id, inquiry_id,
            title=body.title, description=body.description, notes=body.notes,
        )
        return _inquiry_payload(inquiry)

    @app.post("/inquiries/{inquiry_id}/datapoints", status_code=201)
    def capture(inquiry_id: str, body: DataPointBody,
                user: UserAccount = Depends(current_user)):
        measurement = Measurement(
            SensorType.from_wire_name(body.measurement.sensor_type),
            body.measurement.timestamp_ms,
            tuple(body.measurement.values),
        )
        slot = db.capture_data_point(
            user.id, inquiry_id, measurement, body.label, body.photo_ref
        )
        return {
            "index": slot.index, "label": slot.label, "photo_ref": slot.photo_ref,
            "measurement": {
                "sensor_type": slot.measurement.sensor_type.wire_name,
                "timestamp_ms": slot.measurement.timestamp_ms,
                "values": list(slot.measurement.values),
            },
        }

    @app.post("/inquiries/{inquiry_id}/publish")
    def publish(inquiry_id: str, user: UserAccount = Depends(current_user)):
        return _inquiry_payload(db.publish_inquiry(user.id, inquiry_id))

    @app.post("/inquiries/{inquiry_id}/comments", status_code=201)
    def comment(inquiry_id: str, body: CommentBody,
                user: UserAccount = Depends(current_user)):
        created = db.add_comment(user.id, inquiry_id, body.body)
        return {
            "id": created.id, "inquiry_id": created.inquiry_id,
            "author_id": created.author_id, "body": created.body,
            "created_at": created.created_at.isoformat(),
        }

    @app.get("/inquiries/{inquiry_id}/comments")
    def comments(inquiry_id: str, user: UserAccount = Depends(current_user)):
        db.get_inquiry(user.id, inquiry_id)
        return {
            "items": [
                {
                    "id": c.id, "author_id": c.author_id, "body": c.body,
                    "created_at": c.created_at.isoformat(),
                }
                for c in db.comments_for(inquiry_id)
            ]
        }

    @app.post("/inquiries/{inquiry_id}/replicate", status_code=201)
    def replicate(inquiry_id: str, user: UserAccount = Depends(current_user)):
        return _inquiry_payload(db.replicate_inquiry(user.id, inquiry_id))

    @app.post("/inquiries/{inquiry_id}/remix", status_code=201)
    def remix(inquiry_id: str, user: UserAccount = Depends(current_user)):
        return _inquiry_payload(db.remix_inquiry(user.id, inquiry_id))

    @app.post("/inquiries/{inquiry_id}/score_override")
    def score_override(inquiry_id: str, body: OverrideBody,
                       user: UserAccount = Depends(current_user)):
        return _inquiry_payload(
            db.override_score(user.id, inquiry_id, body.category, body.reason)
        )

    # -- photos ----------------------------------------------------------------------

    @app.post("/photos", status_code=201)
    async def upload_photo(request: Request,
                           user: UserAccount = Depends(current_user)):
        data = await request.body()
        media_type = request.headers.get("content-type", "image/jpeg")
        blob = db.put_photo(data, media_type)
        return {"id": blob.id, "media_type": blob.media_type, "size": blob.size}

    @app.get("/photos/{photo_id}")
    def get_photo(photo_id: str, user: UserAccount = Depends(current_user)):
        data, media_type = db.get_photo(photo_id)
        return Response(content=data, media_type=media_type)

    # -- device gateway -----------------------------------------------------------------

    @app.get("/devices")
    def devices(user: UserAccount = Depends(current_user)):
        return {"items": gateway.list_devices()}

    @app.post("/devices/{serial}/fault")
    def device_fault(serial: int, body: FaultBody,
                     user: UserAccount = Depends(current_user)):
        gateway.inject_fault(serial, body.fault)
        return {"serial": serial, "fault": body.fault}

    @app.get("/devices/{serial}/stream")
    def device_stream(serial: int, user: UserAccount = Depends(current_user),
                      limit: Optional[int] = Query(None, ge=1, le=10000)):
        subscriber = gateway.subscribe(serial)

        def records():
            sent = 0
            try:
                while limit is None or sent < limit:
                    try:
                        record = subscriber.pop(timeout=10.0)
                    except TimeoutError:
                        yield json.dumps({"error": "stream stalled"}) + "\n"
                        return
                    if record is STREAM_END:
                        return
                    yield json.dumps(record) + "\n"
                    sent += 1
                    if "error" in record:
                        return
            finally:
                gateway.unsubscribe(serial, subscriber)

        return StreamingResponse(records(), media_type="application/x-ndjson")

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "counts": db.counts()}

    app.state.db = db
    app.state.gateway = gateway
    return app
