"""STAC item generation for job result assets."""

from __future__ import annotations

from typing import Any

from .signing import SignedUrl, verify_signed_url

STAC_VERSION = "1.0.0"

WORLD_BBOX = [-180.0, -90.0, 180.0, 90.0]


def make_stac_item(
    item_id: str,
    asset_name: str,
    asset_url: SignedUrl,
    media_type: str,
    provenance_url: SignedUrl,
    spatial_extent: dict | None,
    temporal_instant: str,
    secret: str,
    now: float,
    properties: dict[str, Any] | None = None,
) -> dict[str, Any]:
    """Build a STAC Feature for one result asset.

    Every href is a signed URL and must verify at creation time; the item
    always links the run's provenance document under rel "provenance".
    """
    for url in (asset_url, provenance_url):
        if not verify_signed_url(str(url), secret, now):
            raise ValueError(f"refusing to emit non-verifying href {url}")
    bbox = _bbox_from_extent(spatial_extent)
    west, south, east, north = bbox
    return {
        "type": "Feature",
        "stac_version": STAC_VERSION,
        "id": item_id,
        "bbox": bbox,
        "geometry": {
            "type": "Polygon",
            "coordinates": [[
                [west, south], [east, south], [east, north], [west, north], [west, south],
            ]],
        },
        "properties": {"datetime": temporal_instant, **(properties or {})},
        "assets": {asset_name: {"href": str(asset_url), "type": media_type}},
        "links": [
            {"rel": "provenance", "href": str(provenance_url), "type": "application/json"}
        ],
    }


def _bbox_from_extent(extent: dict | None) -> list[float]:
    if not extent:
        return list(WORLD_BBOX)
    try:
        return [
            float(extent["west"]),
            float(extent["south"]),
            float(extent["east"]),
            float(extent["north"]),
        ]
    except (KeyError, TypeError, ValueError):
        return list(WORLD_BBOX)
