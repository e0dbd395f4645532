import logging


LOG = logging.getLogger('jcthermo')
LOG.addHandler(logging.NullHandler())

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'


class LoggingMixin(object):

    _log_name = 'jcthermo'

    def _log(self, level, msg, *attrs):
        LOG.log(level, '%s %s' % (self._log_name, msg), *attrs)

    def _debug(self, msg, *attrs):
        self._log(logging.DEBUG, msg, *attrs)

    def _info(self, msg, *attrs):
        self._log(logging.INFO, msg, *attrs)


def configure(verbose=False, stream=None):
    """ Attach a stream handler to the package logger (used by the CLI) """
    handler = logging.StreamHandler(stream)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    LOG.addHandler(handler)
    LOG.setLevel(logging.DEBUG if verbose else logging.INFO)
    return handler
