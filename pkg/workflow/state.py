from typing import TypedDict, Optional, List, Dict, Any
from datetime import datetime

class ReproductionState(TypedDict):
    config: Dict[str, Any]
    checks: List[Dict[str, Any]]
    errors: List[str]
    status: str
    start_time: datetime
    end_time: Optional[datetime]
