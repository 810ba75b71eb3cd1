import os
from dotenv import load_dotenv

# This loads all variables from .env file
load_dotenv()

OUTPUT_DIR = os.environ.get('ISAC_OUTPUT_DIR', 'results')
LOG_DIR = os.environ.get('ISAC_LOG_DIR', 'logs')
CACHE_DIR = os.environ.get('ISAC_CACHE_DIR', '.cache')
DEFAULT_CONFIG_PATH = os.environ.get(
    'ISAC_CONFIG',
    os.path.join(os.path.dirname(os.path.abspath(__file__)), 'configs', 'table1.json'),
)

# Feasibility gating tolerance shared by projections, reports and margins.
FEASIBILITY_TOL = 1e-9
