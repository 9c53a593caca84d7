import logging
from datetime import datetime
from db.models import Log

class DatabaseLogHandler(logging.Handler):
    def __init__(self, session_maker, level=logging.WARNING):
        super().__init__(level)
        self.session_maker = session_maker

    def emit(self, record):
        try:
            with self.session_maker() as session:
                # run_id is attached by the harness through LoggerAdapter extras
                run_id = getattr(record, 'run_id', None)

                log = Log(
                    timestamp=datetime.fromtimestamp(record.created),
                    level=record.levelname,
                    source=record.name,
                    message=self.format(record),
                    run_id=run_id
                )
                session.add(log)
                session.commit()
        except Exception:
            self.handleError(record)
