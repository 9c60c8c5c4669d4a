PROB_TOL = 1e-12                 # допуск для суми ймовірностей на симплексі
RENYI_LIMIT_TOL = 1e-9           # |α−1| менше цього → гілка Шеннона
GRID_STEP = 1e-3                 # крок грубої сітки для скалярної оптимізації
GOLDEN_TOL = 1e-10               # ширина інтервалу після золотого перетину
AGREEMENT_TOL = 1e-9             # closed-form vs оптимізатор
TIE_FAST_PATH = 1e-7             # |Δ log p| більше → порівнюємо float-ами, інакше точно
RANK_BLOCK_CACHE = 512           # таблиць серій на всі рушії рангів разом
RANK_COMPLETION_CACHE = 2 ** 18  # лічильників доповнень префікса всередині серії
TYPE_RUNS_CACHE = 4_096          # наборів типів, уже розбитих на серії
CONVERGENCE_TOL = 1e-3           # дозволений відкат |E_n − E∞| між сусідніми n

DEFAULT_ENUMERATION_CAP = 2 ** 24
DEFAULT_PRODUCT_OUTPUT_CAP = 10 ** 6
DEFAULT_RANK_TYPE_CAP = 2_000_000
DEFAULT_SIM_BLOCK = 65_536       # кількість спроб в одному блоці симуляції

DMC_MAX_ALPHABET = 4             # межа |X|, |Y| для загального DMC-оптимізатора
DMC_MAX_RESOLUTION = 0.1         # грубіше за це оптимізатор не бракетує
DMC_GRID_POINTS = 4_000          # бюджет точок грубої сітки по симплексу
DMC_REFINE_TOP = 5               # скільки кандидатів уточнюємо Nelder–Mead

LOWERCASE = "abcdefghijklmnopqrstuvwxyz"
ERASURE = "?"
DEFAULT_FLIP_PROB = 0.3          # як у підписі до таблиці сестринських паролів
DEFAULT_TOY_BUDGETS = tuple(2 ** k for k in range(0, 25))
TOY_CHECK_M = 31                 # сестер у налаштуванні, де об'єднання явно виграє
TOY_CHECK_LENGTH = 16            # фіксована довжина паролів для того ж налаштування
TOY_CHECK_SEEDS = (0, 1, 2, 3, 4)

FLOAT_DIGITS = 9                 # значущих цифр у CSV/JSON
