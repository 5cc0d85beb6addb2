"""Source parsers: metadata documents to typed records."""
from .cf import SourceError, parse_cf_table
from .cleansing import CleansingError, Transform, apply_transforms, parse_transform
from .cmip_cv import parse_cmip_cv
from .cmor import merge_mip_variables, parse_cmor_table
from .drs import FREQUENCY_DURATIONS, DrsError, parse_dataset_listing, parse_drs_id, parse_ensemble
from .records import (
    RECORD_KINDS,
    CfVariable,
    ClimdexIndex,
    CordexDomain,
    DatasetRecord,
    DrsComponents,
    Ensemble,
    IngestWarning,
    InstitutionRecord,
    MipVariable,
    ModelRecord,
    WarningLog,
)
from .tabular import is_rotated_pole, parse_climdex, parse_cordex_domains

__all__ = [name for name in dir() if not name.startswith("_")]
