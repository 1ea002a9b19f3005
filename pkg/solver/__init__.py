from app.constants import Scheme
from app.exceptions import InvalidArgumentError
from app.schema import SolverConfig
from solver.relaxed import RelaxedFixedPoint
from solver.standard import StandardFixedPoint
from utils.logger import get_logger

logger = get_logger(__name__)


class SchemePlugin:
    def get_scheme(self, config: SolverConfig):
        schemes = {
            Scheme.STANDARD: StandardFixedPoint,
            Scheme.RELAXED: RelaxedFixedPoint,
        }
        scheme_cls = schemes.get(config.scheme)

        if not scheme_cls:
            logger.error(f"Unsupported iterative scheme: {config.scheme}")
            raise InvalidArgumentError(f"Unsupported iterative scheme: {config.scheme}")

        return scheme_cls(config)
