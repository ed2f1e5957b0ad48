# cli.py
"""
Командная строка spanner-sim: генераторы, запуск протоколов,
стриминг, проверка спаннеров, sweep и оценка наклона
"""
import logging
import sys
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import click
import pandas as pd

from analysis import (
    SweepGrid,
    SweepPointError,
    fit_exponent,
    format_fits,
    format_rows,
    load_rows,
    sweep,
)
from config import (
    DEFAULT_C_R1_K,
    DEFAULT_C_RATE,
    DEFAULT_C_SAMPLE,
    DEFAULT_C_SLOTS,
    DEFAULT_DELTA,
    DEFAULT_EDGE_EXPONENT,
    DEFAULT_EDGE_FACTOR,
    DEFAULT_PARTITION_MODE,
    DEFAULT_SEED,
    LOG_DIR,
    LOG_FILE_NAME,
    LOG_LEVEL,
    PROG_NAME,
    SWEEP_JOBS,
    VERIFY_CAP,
)
from file_formats import (
    ParseError,
    format_graph,
    format_partition,
    format_stream,
    read_graph,
    read_partition,
    read_stream,
    write_graph,
    write_partition,
)
from generators import (
    PartitionMode,
    biregular_girth6,
    complete_bipartite,
    hard_instance_mult3,
    partition_edges,
    projective_incidence,
    random_gnm,
)
from graph_core import SpannerDomainError, verify_additive, verify_multiplicative
from metrics import SpannerMetrics
from protocols import PROTOCOLS, run_split_protocol, verify_result
from sampling_params import SamplingPlan
from simnet import ROW_COLUMNS, run_protocol
from streaming import churned_stream, stream_spanner
from utils import cleanup_file_safe, config_echo_lines, format_bits, parse_fixed, parse_int_list

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2


def setup_logging():
    """Файл с ротацией и консоль (stderr); повторный вызов ничего не добавляет"""
    root_logger = logging.getLogger()
    if getattr(root_logger, "_spanner_configured", False):
        return

    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - [%(filename)s:%(lineno)d] - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )
    level = getattr(logging, LOG_LEVEL.upper(), logging.INFO)

    try:
        LOG_DIR.mkdir(parents=True, exist_ok=True)
        file_handler = RotatingFileHandler(
            LOG_DIR / LOG_FILE_NAME,
            maxBytes=10 * 1024 * 1024,  # 10 МБ на файл
            backupCount=5,
            encoding='utf-8'
        )
        file_handler.setFormatter(formatter)
        file_handler.setLevel(level)
        root_logger.addHandler(file_handler)
    except OSError as e:
        print(f"⚠️ Log file disabled: {e}", file=sys.stderr)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)
    console_handler.setLevel(logging.WARNING)
    root_logger.addHandler(console_handler)

    root_logger.setLevel(level)
    root_logger._spanner_configured = True


def _emit(text: str, out: Optional[str]):
    """Пишет результат в файл или в stdout"""
    if out is None or out == "-":
        click.echo(text, nl=False)
        return
    path = Path(out)
    try:
        path.write_text(text, encoding="utf-8")
    except Exception:
        cleanup_file_safe(path)
        raise
    logger.info(f"✅ Written: {path}")


def _header(command: str, params: Dict[str, object]) -> List[str]:
    return config_echo_lines(f"{PROG_NAME} {command}", params)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def cli():
    """Симулятор спаннеров в модели с координатором"""


# === gen ===

@cli.group()
def gen():
    """Генераторы графов, разбиений и потоков"""


@gen.command("complete-bipartite")
@click.option("--a", type=int, required=True, help="Размер левой доли")
@click.option("--b", type=int, required=True, help="Размер правой доли")
@click.option("--out", default=None, help="Файл графа (по умолчанию stdout)")
def gen_complete_bipartite(a, b, out):
    g = complete_bipartite(a, b)
    _emit(format_graph(g, _header("gen complete-bipartite", {"a": a, "b": b})), out)


@gen.command("gnm")
@click.option("--n", type=int, required=True, help="Число вершин")
@click.option("--m", type=int, required=True, help="Число рёбер")
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
@click.option("--out", default=None, help="Файл графа (по умолчанию stdout)")
def gen_gnm(n, m, seed, out):
    g = random_gnm(n, m, seed)
    _emit(format_graph(g, _header("gen gnm", {"n": n, "m": m, "seed": seed})), out)


@gen.command("projective")
@click.option("--q", type=int, required=True, help="Простой порядок плоскости")
@click.option("--out", default=None, help="Файл графа (по умолчанию stdout)")
def gen_projective(q, out):
    g = projective_incidence(q)
    _emit(format_graph(g, _header("gen projective", {"q": q})), out)


@gen.command("biregular")
@click.option("--q", type=int, required=True, help="Простой порядок плоскости")
@click.option("--g", "split", type=int, default=1, show_default=True, help="Делитель q+1")
@click.option("--out", default=None, help="Файл графа (по умолчанию stdout)")
def gen_biregular(q, split, out):
    g = biregular_girth6(q, split)
    _emit(format_graph(g, _header("gen biregular", {"q": q, "g": split})), out)


@gen.command("hard-mult3")
@click.option("--q", type=int, required=True, help="Простой порядок плоскости")
@click.option("--s", type=int, required=True, help="Число игроков")
@click.option("--g", "split", type=int, default=1, show_default=True, help="Делитель q+1")
@click.option("--out", required=True, help="Файл графа")
@click.option("--partition-out", required=True, help="Файл разбиения")
def gen_hard_mult3(q, s, split, out, partition_out):
    g, partition = hard_instance_mult3(q, s, split)
    header = _header("gen hard-mult3", {"q": q, "s": s, "g": split})
    write_graph(g, out, header)
    write_partition(partition, partition_out, header)


@gen.command("partition")
@click.option("--graph", "graph_path", required=True, help="Файл графа")
@click.option("--s", type=int, required=True, help="Число игроков")
@click.option("--mode", type=click.Choice(PartitionMode.ALL), default=DEFAULT_PARTITION_MODE,
              show_default=True)
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
@click.option("--out", default=None, help="Файл разбиения (по умолчанию stdout)")
def gen_partition(graph_path, s, mode, seed, out):
    g = read_graph(graph_path)
    partition = partition_edges(g, s, mode, seed)
    params = {"graph": graph_path, "s": s, "mode": mode, "seed": seed}
    _emit(format_partition(partition, _header("gen partition", params)), out)


@gen.command("stream")
@click.option("--graph", "graph_path", required=True, help="Файл графа")
@click.option("--churn", type=float, default=0.2, show_default=True,
              help="Доля шумовых пар вставка/удаление")
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
@click.option("--out", default=None, help="Файл потока (по умолчанию stdout)")
def gen_stream(graph_path, churn, seed, out):
    g = read_graph(graph_path)
    stream = churned_stream(g, churn, seed)
    params = {"graph": graph_path, "churn": churn, "seed": seed}
    _emit(format_stream(stream, _header("gen stream", params)), out)


# === run ===

@cli.command("run")
@click.argument("protocol", type=click.Choice(list(PROTOCOLS)))
@click.option("--graph", "graph_path", required=True, help="Файл графа")
@click.option("--partition", "partition_path", required=True, help="Файл разбиения")
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
@click.option("--k", type=int, default=None, help="Параметр растяжения k")
@click.option("--beta", type=int, default=None, help="Аддитивная граница для additive-k (вместо --k)")
@click.option("--c-sample", type=float, default=DEFAULT_C_SAMPLE, show_default=True,
              help="Константа размеров выборок")
@click.option("--c-r1-k", type=float, default=DEFAULT_C_R1_K, show_default=True,
              help="Константа добавки к R1 в additive-k")
@click.option("--c-rate", type=float, default=DEFAULT_C_RATE, show_default=True,
              help="Константа вероятности выборки в baswana-sen")
@click.option("--delta", type=float, default=DEFAULT_DELTA, help="Вероятность ошибки (по умолчанию 1/n)")
@click.option("--free-randomness", is_flag=True, help="Общая случайность бесплатна")
@click.option("--split-duplicates", is_flag=True,
              help="Разбиение с дублированием: расщепить вершины и поднять H")
@click.option("--verify", is_flag=True, help="Проверить растяжение оракулом APSP")
@click.option("--out", default=None, help="CSV со строкой результата (по умолчанию stdout)")
@click.option("--spanner-out", default=None, help="Файл графа H")
def run_command(protocol, graph_path, partition_path, seed, k, beta, c_sample, c_r1_k, c_rate,
                delta, free_randomness, split_duplicates, verify, out, spanner_out):
    """Запуск протокола PROTOCOL на графе и разбиении"""
    g = read_graph(graph_path)
    partition = read_partition(partition_path)
    if k is None:
        k = beta

    try:
        plan = SamplingPlan(c=c_sample, delta=delta, c_r1_k=c_r1_k, c_rate=c_rate)
    except ValueError as e:
        raise click.UsageError(str(e)) from e
    runner = run_split_protocol if split_duplicates else run_protocol
    result = runner(protocol, g, partition, seed, k=k, plan=plan, free_randomness=free_randomness)
    ok = verify_result(g, result) if verify else True

    params = {
        "protocol": protocol, "graph": graph_path, "partition": partition_path,
        "seed": seed, "k": k, "c_sample": c_sample, "c_r1_k": c_r1_k, "c_rate": c_rate,
        "delta": delta, "free_randomness": free_randomness,
        "split_duplicates": split_duplicates, "verify": verify,
    }
    row = pd.DataFrame([result.to_row(g, seed)], columns=ROW_COLUMNS)
    _emit(format_rows(row, f"{PROG_NAME} run", params), out)
    if spanner_out:
        _emit(format_graph(result.h, _header("run", params)), spanner_out)

    logger.info(f"📊 {protocol}: {format_bits(result.transcript.total_bits)}")
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


# === stream-run ===

@cli.command("stream-run")
@click.option("--stream", "stream_path", required=True, help="Файл turnstile-потока")
@click.option("--k", type=int, required=True, help="Параметр растяжения k ≥ 2")
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
@click.option("--c-slots", type=float, default=DEFAULT_C_SLOTS, show_default=True,
              help="Константа числа ячеек банка восстановления")
@click.option("--passes-check", is_flag=True, help="Проверить число проходов ⌊k/2⌋+1")
@click.option("--verify", is_flag=True, help="Проверить растяжение 2k-1 на итоговом графе")
@click.option("--out", default=None, help="Файл графа H")
def stream_run_command(stream_path, k, seed, c_slots, passes_check, verify, out):
    """Спаннер по turnstile-потоку на ℓ0-семплерах"""
    stream = read_stream(stream_path)
    result = stream_spanner(stream, k, seed, c_slots=c_slots)

    params = {"stream": stream_path, "k": k, "seed": seed, "c_slots": c_slots}
    lines = _header("stream-run", params) + [
        f"passes={result.passes}",
        f"spanner_edges={result.h.m}",
        f"space_words={result.space_words}",
        f"space_words_used={result.space_words_used}",
    ]

    status = EXIT_OK
    if passes_check and result.passes != k // 2 + 1:
        logger.error(f"❌ passes={result.passes}, expected {k // 2 + 1}")
        status = EXIT_VERIFY_FAILED
    if verify:
        ok = verify_multiplicative(stream.net_graph(), result.h, 2 * k - 1)
        lines.append(f"verified={int(ok)}")
        if not ok:
            status = EXIT_VERIFY_FAILED

    click.echo("\n".join(lines))
    if out:
        _emit(format_graph(result.h, _header("stream-run", params)), out)
    return status


# === verify ===

@cli.command("verify")
@click.option("--graph", "graph_path", required=True, help="Файл графа G")
@click.option("--spanner", "spanner_path", required=True, help="Файл графа H")
@click.option("--additive", type=int, default=None, help="Проверить d_H ≤ d_G + β")
@click.option("--multiplicative", type=int, default=None, help="Проверить d_H ≤ α·d_G")
def verify_command(graph_path, spanner_path, additive, multiplicative):
    """Проверка спаннера и отчёт о растяжении"""
    if (additive is None) == (multiplicative is None):
        raise click.UsageError("Нужен ровно один из --additive / --multiplicative")

    g = read_graph(graph_path)
    h = read_graph(spanner_path)
    if additive is not None:
        ok = verify_additive(g, h, additive)
        target = f"additive +{additive}"
    else:
        ok = verify_multiplicative(g, h, multiplicative)
        target = f"multiplicative ×{multiplicative}"

    metrics = SpannerMetrics.calculate(g, h)
    click.echo(SpannerMetrics.format_report(metrics, target, ok))
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


# === sweep ===

@cli.command("sweep")
@click.option("--protocol", type=click.Choice(list(PROTOCOLS)), required=True)
@click.option("--n", "n_values", required=True, help="Список n, например 128,512,2048")
@click.option("--s", "s_values", required=True, help="Список s, например 4,16,64")
@click.option("--k", "k_values", default=None, help="Список k")
@click.option("--seeds", default=str(DEFAULT_SEED), show_default=True, help="Список сидов, например 1-5")
@click.option("--edge-exponent", type=float, default=DEFAULT_EDGE_EXPONENT, show_default=True)
@click.option("--edge-factor", type=float, default=DEFAULT_EDGE_FACTOR, show_default=True)
@click.option("--mode", type=click.Choice(PartitionMode.ALL), default=DEFAULT_PARTITION_MODE,
              show_default=True)
@click.option("--verify-cap", type=int, default=VERIFY_CAP, show_default=True,
              help="Проверять растяжение только при n ≤ cap")
@click.option("--jobs", type=int, default=SWEEP_JOBS, show_default=True, help="Число процессов")
@click.option("--c-sample", type=float, default=DEFAULT_C_SAMPLE, show_default=True)
@click.option("--c-r1-k", type=float, default=DEFAULT_C_R1_K, show_default=True)
@click.option("--c-rate", type=float, default=DEFAULT_C_RATE, show_default=True)
@click.option("--delta", type=float, default=DEFAULT_DELTA)
@click.option("--free-randomness", is_flag=True)
@click.option("--progress/--no-progress", default=True, show_default=True)
@click.option("--out", default=None, help="CSV (по умолчанию stdout)")
def sweep_command(protocol, n_values, s_values, k_values, seeds, edge_exponent, edge_factor,
                  mode, verify_cap, jobs, c_sample, c_r1_k, c_rate, delta, free_randomness, progress,
                  out):
    """Серия запусков по сетке n × s × k × seeds"""
    try:
        grid = SweepGrid(
            protocol=protocol,
            n_values=tuple(parse_int_list(n_values)),
            s_values=tuple(parse_int_list(s_values)),
            k_values=tuple(parse_int_list(k_values)) if k_values else (None,),
            seeds=tuple(parse_int_list(seeds)),
            edge_exponent=edge_exponent,
            edge_factor=edge_factor,
            partition_mode=mode,
            verify_cap=verify_cap,
            jobs=jobs,
            c_sample=c_sample,
            c_r1_k=c_r1_k,
            c_rate=c_rate,
            delta=delta,
            free_randomness=free_randomness,
        )
    except ValueError as e:
        raise click.UsageError(str(e)) from e

    df = sweep(grid, progress=progress)
    _emit(format_rows(df, f"{PROG_NAME} sweep", grid.config()), out)
    return EXIT_OK


# === fit ===

@cli.command("fit")
@click.option("--csv", "csv_path", required=True, type=click.Path(exists=True, dir_okay=False),
              help="CSV из sweep или run")
@click.option("--variable", type=click.Choice(["n", "s", "k"]), required=True)
@click.option("--fixed", multiple=True, help="Фиксированная координата key=value (можно несколько)")
@click.option("--y", default="total_bits", show_default=True, help="Колонка отклика")
@click.option("--out", default=None, help="JSON lines (по умолчанию stdout)")
def fit_command(csv_path, variable, fixed, y, out):
    """Наклон log(y) от log(variable)"""
    try:
        fixed_values = parse_fixed(fixed)
    except ValueError as e:
        raise click.UsageError(str(e)) from e

    rows = load_rows(csv_path)
    try:
        result = fit_exponent(rows, variable, fixed_values, y)
    except KeyError as e:
        raise click.UsageError(f"В {csv_path} нет колонки {e}") from e
    params = {"csv": csv_path, "variable": variable, "fixed": ",".join(fixed), "y": y}
    _emit(format_fits([result], params), out)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Точка входа

    Returns:
        0 - успех, 1 - спаннер не прошёл проверку, 2 - ошибка использования или входа
    """
    setup_logging()
    args = list(sys.argv[1:] if argv is None else argv)
    try:
        status = cli.main(args=args, prog_name=PROG_NAME, standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return EXIT_USAGE
    except (ParseError, SpannerDomainError, SweepPointError) as e:
        logger.error(f"❌ {e}")
        click.echo(f"Error: {e}", err=True)
        return EXIT_USAGE
    except click.Abort:
        return EXIT_USAGE
    return status if isinstance(status, int) else EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
