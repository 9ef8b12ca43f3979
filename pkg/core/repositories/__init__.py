from .base import BaseArtifactRepository, format_number, to_jsonable

__all__ = ["BaseArtifactRepository", "format_number", "to_jsonable"]
