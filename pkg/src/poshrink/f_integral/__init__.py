from poshrink.f_integral.cache import F_cache, FCache  # noqa
from poshrink.f_integral.monte_carlo import F_monte_carlo, log_F_ratio_monte_carlo  # noqa
from poshrink.f_integral.quadrature import F_quadrature  # noqa
from poshrink.f_integral.schemas import FEstimate, FRatio  # noqa
from poshrink.f_integral.service import FIntegralService, evaluate_F, log_F_ratio  # noqa
