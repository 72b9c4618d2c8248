# Command services used by the cli
from .state_io import load_state, save_state, parse_state, save_report, load_report, dumps_report, to_jsonable
from .lab_service import LabService, load_suite_config, default_protocol_config
