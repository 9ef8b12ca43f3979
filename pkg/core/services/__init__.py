from .base import BaseService
from .parallel import map_ordered

__all__ = ["BaseService", "map_ordered"]
