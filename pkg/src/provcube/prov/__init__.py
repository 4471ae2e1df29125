"""W3C-PROV provenance recording, serialization, and statistics."""

from .dot import to_dot
from .jsonio import document_to_obj, read_prov_json, to_prov_json
from .model import (
    ActivityStatus,
    AgentKind,
    EntityRole,
    ProvActivity,
    ProvAgent,
    ProvDocument,
    ProvEntity,
    Relation,
    RelationKind,
    ValueDescriptor,
)
from .recorder import ProvRecorder
from .stats import stats

__all__ = [
    "ActivityStatus",
    "AgentKind",
    "EntityRole",
    "ProvActivity",
    "ProvAgent",
    "ProvDocument",
    "ProvEntity",
    "ProvRecorder",
    "Relation",
    "RelationKind",
    "ValueDescriptor",
    "document_to_obj",
    "read_prov_json",
    "stats",
    "to_dot",
    "to_prov_json",
]
