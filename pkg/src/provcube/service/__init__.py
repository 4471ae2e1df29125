"""Simulated remote back-end: jobs, signed URLs, STAC items, HTTP API."""

from .api import create_app
from .jobs import Job, JobService, JobStatus, ResultAsset, ServiceConfig
from .signing import SignedUrl, sign_url, verify_signed_url
from .stac import make_stac_item

__all__ = [
    "Job",
    "JobService",
    "JobStatus",
    "ResultAsset",
    "ServiceConfig",
    "SignedUrl",
    "create_app",
    "make_stac_item",
    "sign_url",
    "verify_signed_url",
]
