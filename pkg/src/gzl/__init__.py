import logging

logger = logging.getLogger(__name__)


from gzl.exception import *
from gzl.configutils import *
from gzl.fieldutils import *
from gzl.scalarutils import *
from gzl.seriesutils import *
from gzl.matrixutils import *
from gzl.curveutils import *
from gzl.divisorutils import *
from gzl.idealutils import *
from gzl.skewutils import *
from gzl.recogutils import *
from gzl.drinfeldutils import *
from gzl.tensorutils import *
from gzl.motiveutils import *
from gzl.zetautils import *
from gzl.thread import *
from gzl.rand import *
from gzl.report import *
