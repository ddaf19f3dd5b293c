"""Main CLI entry point."""

import asyncio
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np

from application.services.calibration import MIN_SETPOINTS, calibration_fit, segment_means
from application.services.comag import dispersion_contour, line_center_estimate, synthesize_acquisition
from application.services.drift import temperature_offset
from application.services.noise_analysis import allan_deviation, welch_asd
from application.services.protocol import (
    calibrate_polarization,
    fit_ramsey_fringe,
    polarization_recursion,
    polarization_steps,
    ramsey_sweep,
)
from application.services.resonance_tracker import ResonanceTracker
from application.services.scenario_runner import COMAG_STREAM, GYRO_STREAM, ScenarioRunner, derive_rng
from application.services.spin_core import central_line, odmr_spectrum, transition_table
from application.strategies.strategy_factory import StrategyFactory
from config.config_loader import ConfigLoader, GyroConfig
from domain.entities.measurements import ScenarioRecord
from domain.entities.spin_state import SpinState
from domain.entities.time_series import TimeSeries
from domain.exceptions import ConfigurationError, GyroSimulationError, NumericalError, ValidationError
from infrastructure.container import Container
from infrastructure.logging.structured_logger import LogLevel, configure_logging
from infrastructure.storage.csv_storage import render_csv
from .argument_parser import CLIArgumentParser

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

ODMR_HEADER = ("label", "m_s_pair", "m_i", "freq_hz")
RAMSEY_HEADER = ("tau_s", "signal")
POLARIZE_HEADER = ("iteration", "p0_density", "p0_recursion")
COMAG_HEADER = ("t_s", "f_minus_hz", "f_plus_hz", "b_nt", "dt_k")
CONTOUR_HEADER = ("detuning_hz", "error")
GYRO_HEADER = ("t_s", "s_n", "s_p", "delta_omega_rad_s")
ASD_HEADER = ("freq_hz", "asd")
ALLAN_HEADER = ("tau_s", "adev")


def run_replica(config: GyroConfig, seed: int) -> List[List[float]]:
    """Run one scenario replica and return its CSV rows (process-pool entry point)."""
    config = config.with_overrides(seed=seed)
    factory = StrategyFactory()
    strategy = factory.create_strategy(config.simulation.evolution, config.constants, config.protocol.to_dict())
    runner = ScenarioRunner(
        config.constants,
        config.protocol,
        config.decoherence,
        config.comag,
        config.mems,
        config.simulation,
        config.environment,
        strategy,
    )
    result = runner.run(config.scenario())
    return [record.to_row() for record in result.records]


class CLIApplication:
    """Main CLI application class."""

    def __init__(self):
        self.arg_parser = CLIArgumentParser()
        self.config: Optional[GyroConfig] = None
        self.container: Optional[Container] = None
        self.logger = None

    async def run(self, args: Optional[list] = None) -> int:
        """Run the CLI application and return the process exit code."""
        try:
            parsed_args = self.arg_parser.parse_args(args)
            try:
                self.arg_parser.validate_args(parsed_args)
                self._load(parsed_args)
            except (ConfigurationError, ValidationError, ValueError) as e:
                print(f"Configuration error: {e}", file=sys.stderr)
                return EXIT_CONFIG

            start_time = time.time()
            self.logger.log_run_start(parsed_args.command, self.config.simulation.to_dict())
            handler = getattr(self, f"_{parsed_args.command}")
            records = await handler(parsed_args)
            self.logger.log_run_complete(parsed_args.command, records, time.time() - start_time)
            return EXIT_OK

        except KeyboardInterrupt:
            if self.logger:
                self.logger.warning("Run interrupted by user")
            return EXIT_FAILURE
        except ConfigurationError as e:
            self._report(e)
            return EXIT_CONFIG
        except NumericalError as e:
            self._report(e)
            return EXIT_NUMERICAL
        except GyroSimulationError as e:
            self._report(e)
            return EXIT_FAILURE
        finally:
            if self.logger:
                self.logger.close()

    def _report(self, error: Exception):
        if self.logger:
            self.logger.log_error(error)
        print(f"Error: {error}", file=sys.stderr)

    def _load(self, args):
        """Load config.md, apply flag overrides and build the container."""
        config = ConfigLoader(args.config).load_settings()
        self.config = config.with_overrides(
            seed=args.seed,
            shot_noise=False if args.no_shot_noise else None,
            output_dir=args.out,
        )
        level = LogLevel.from_name(self.config.infrastructure["log_level"])
        configure_logging(level)
        self.container = Container.create_from_config(self.config.to_container_dict())
        self.logger = self.container.logger()

    @property
    def _seed(self) -> int:
        return self.config.simulation.seed

    def _rng(self, stream: int) -> Optional[np.random.Generator]:
        return derive_rng(self._seed, stream) if self.config.simulation.shot_noise else None

    async def _save(self, name: str, header, rows) -> Path:
        storage = self.container.csv_storage()
        return await storage.save_csv(Path(name), header, rows)

    # ------------------------------------------------------------------
    # Commands
    # ------------------------------------------------------------------

    async def _odmr(self, args) -> int:
        lines = transition_table(self.config.constants, self.config.environment)
        rows = [[line.label, line.m_s_pair, line.m_i, line.frequency] for line in lines]
        path = await self._save("odmr.csv", ODMR_HEADER, rows)
        sys.stdout.write(render_csv(ODMR_HEADER, rows))
        print(f"✅ {len(rows)} transitions written to {path}")
        return len(rows)

    async def _ramsey(self, args) -> int:
        config = self.config
        runner = self.container.gyro_cycle_runner()
        env = config.environment
        taus = np.linspace(args.tau_min, args.tau_max, args.points)
        signal = ramsey_sweep(
            runner.polarized_state(env=env),
            env,
            taus,
            config.decoherence,
            config.noise,
            config.constants,
            rng=self._rng(GYRO_STREAM),
            shot_noise=config.simulation.shot_noise,
            ramsey_fidelity=config.protocol.ramsey_fidelity,
            readout_fidelity=config.protocol.readout_fidelity,
            manifold=config.protocol.readout_manifold,
            strategy=runner.strategy,
        )
        path = await self._save("ramsey.csv", RAMSEY_HEADER, [[tau, value] for tau, value in zip(taus, signal)])

        fit = fit_ramsey_fringe(taus, signal, T2_guess=config.decoherence.T2_star_dq)
        self.logger.log_calibration(
            "ramsey_fringe", {"frequency": fit.frequency, "T2_star": fit.T2_star, "amplitude": fit.amplitude}
        )
        print(f"✅ Ramsey sweep written to {path}")
        print(f"   fringe {fit.frequency:.2f} Hz, T2* {fit.T2_star * 1e3:.3f} ms")
        return len(taus)

    async def _polarize(self, args) -> int:
        protocol = self.config.protocol
        if args.calibrate is not None:
            n_iter = args.iterations if args.iterations is not None else protocol.n_iter
            found = calibrate_polarization(args.calibrate, n_iter)
            self.logger.log_calibration("polarization", found.to_dict())
            protocol = protocol.with_updates(q_preserve=found.q_preserve, pulse_fidelity=found.pulse_fidelity)
            print(f"✅ q_preserve {found.q_preserve:.4f}, pulse_fidelity {found.pulse_fidelity:.4f}")

        n_iter = args.iterations if args.iterations is not None else protocol.n_iter
        strategy = self.container.evolution_strategy()
        state = SpinState.thermal_nuclear()
        densities = [state.nuclear_populations()[0]]
        for state in polarization_steps(
            state, n_iter, protocol.q_preserve, protocol.pulse_fidelity, protocol.pairing,
            env=self.config.environment, strategy=strategy,
        ):
            densities.append(state.nuclear_populations()[0])

        recursion = polarization_recursion(densities[0], n_iter, protocol.q_preserve, protocol.pulse_fidelity)
        rows = [[k, densities[k], recursion[k]] for k in range(n_iter + 1)]
        path = await self._save("polarize.csv", POLARIZE_HEADER, rows)
        print(f"✅ m_i=0 population after {n_iter} iterations: {densities[-1]:.4f} ({path})")
        return len(rows)

    async def _comag(self, args) -> int:
        config = self.config
        c, comag, thermal = config.constants, config.comag, config.thermal
        interval = max(args.interval or comag.acquisition, comag.acquisition)
        populations = self.container.gyro_cycle_runner().polarized_state(env=config.environment).nuclear_populations()

        def lineshape(t: float):
            env = config.environment.with_updates(dT=config.environment.dT + temperature_offset(thermal, t, c), t=t)
            return odmr_spectrum(c, env, populations, comag.line_width, comag.line_contrast)

        nominal = config.environment
        tracker = ResonanceTracker.from_lineshape(
            c, comag, lineshape(0.0), central_line(c, nominal, -1), central_line(c, nominal, 1)
        )
        rng = self._rng(COMAG_STREAM)

        rows = []
        t = 0.0
        while t + comag.acquisition <= args.duration:
            acquired = synthesize_acquisition(lineshape(t), tracker.f_minus, tracker.f_plus, comag, t0=t, rng=rng)
            reading = tracker.update(acquired, t=t + comag.acquisition)
            rows.append([reading.t, reading.f_minus, reading.f_plus, (reading.B_est - nominal.B_z) * 1e9, reading.dT_est])
            t += interval

        path = await self._save("comag.csv", COMAG_HEADER, rows)
        if rows:
            B, dT = line_center_estimate(tracker.f_minus, tracker.f_plus, c)
            print(f"✅ {len(rows)} acquisitions written to {path}; final B {B * 1e3:.6f} mT, dT {dT:+.3f} K")
        else:
            print(f"✅ Duration shorter than one acquisition; empty {path}")

        if args.contour:
            span = comag.span
            detuning = np.linspace(-2.0 * span, 2.0 * span, 401)
            center = central_line(c, nominal, -1)
            error = dispersion_contour(lineshape(0.0), span, center + detuning)
            contour_path = await self._save("contour.csv", CONTOUR_HEADER, [[d, e] for d, e in zip(detuning, error)])
            print(f"   dispersion contour written to {contour_path}")
        return len(rows)

    async def _gyro(self, args) -> int:
        config = self.config
        runner = self.container.gyro_cycle_runner()
        nominal = config.environment.with_updates(Omega=0.0, t=0.0)
        wp = runner.calibrate(nominal)
        self.logger.log_calibration("working_point", {"t_n": wp.t_n, "t_p": wp.t_p, "a": wp.a, "b": wp.b})

        Omega = math.radians(args.rate)
        cycles = max(int(args.duration / runner.cycle_time), 1)
        samples = list(
            runner.run(lambda t: nominal.with_updates(Omega=Omega, t=t), 0.0, cycles, self._rng(GYRO_STREAM))
        )
        rows = [[s.t, s.s_n, s.s_p, s.delta_omega] for s in samples]
        path = await self._save("gyro.csv", GYRO_HEADER, rows)

        mean_rate = math.degrees(0.5 * float(np.mean([s.delta_omega for s in samples])))
        print(f"✅ {cycles} cycles written to {path}; mean rotation {mean_rate:+.3f} deg/s (set {args.rate:+.3f})")
        return cycles

    async def _run(self, args) -> int:
        config = self.config
        replicas = args.replicas or config.simulation.replicas
        scenario = config.scenario()

        if replicas == 1:
            runner = self.container.scenario_runner()
            result = runner.run(scenario)
            batches: List[Tuple[int, List[List[float]]]] = [(scenario.seed, [r.to_row() for r in result.records])]
        else:
            loop = asyncio.get_running_loop()
            seeds = [scenario.seed + index for index in range(replicas)]
            with ProcessPoolExecutor(max_workers=min(replicas, 8)) as pool:
                outputs = await asyncio.gather(
                    *(loop.run_in_executor(pool, run_replica, config, seed) for seed in seeds)
                )
            batches = list(zip(seeds, outputs))

        total = 0
        for seed, rows in batches:
            name = "scenario.csv" if replicas == 1 else f"scenario_seed{seed}.csv"
            path = await self._save(name, ScenarioRecord.CSV_HEADER, rows)
            total += len(rows)
            print(f"✅ {len(rows)} records written to {path}")
            await self._report_calibration(rows, name)
        return total

    async def _report_calibration(self, rows: List[List[float]], name: str):
        records = [ScenarioRecord(*row) for row in rows]
        if len(segment_means(records)) < MIN_SETPOINTS:
            return
        results = {reference: calibration_fit(records, reference=reference).to_dict() for reference in ("true", "mems")}
        self.logger.log_calibration(name, results["true"])
        storage = self.container.csv_storage()
        await storage.save_json(Path(name).with_suffix(".calibration.json"), results)
        fit = results["true"]
        low, high = fit["slope_ci"]
        print(f"   slope {fit['slope']:.4f} [{low:.4f}, {high:.4f}], intercept {fit['intercept']:+.4f} deg/s, r² {fit['r_squared']:.5f}")

    async def _analyze(self, args) -> int:
        storage = self.container.csv_storage()
        input_path = Path(args.input).resolve() if args.input else Path("scenario.csv")
        header, columns = await storage.load_csv(input_path)
        if args.column not in columns:
            raise ConfigurationError(f"analyze.column: '{args.column}' not in {input_path} (columns: {', '.join(header)})")

        time_column = "t_s" if "t_s" in columns else header[0]
        series = TimeSeries(time=columns[time_column], value=columns[args.column], channel=args.column)
        estimate = welch_asd(series, args.segment)
        curve = allan_deviation(series)

        asd_path = await self._save("asd.csv", ASD_HEADER, [[f, a] for f, a in zip(estimate.frequencies, estimate.asd)])
        allan_path = await self._save("allan.csv", ALLAN_HEADER, [[tau, adev] for tau, adev in zip(curve.taus, curve.adev)])
        print(f"✅ ASD written to {asd_path}, Allan deviation to {allan_path}")
        print(f"   {args.column} floor {estimate.floor():.4g} /√Hz")

        # Raw and compensated gyro floors side by side
        if args.column == "omega_nv_dps" and "omega_raw_dps" in columns:
            raw = TimeSeries(time=columns[time_column], value=columns["omega_raw_dps"], channel="omega_raw_dps")
            print(f"   omega_raw_dps floor {welch_asd(raw, args.segment).floor():.4g} /√Hz")
        return len(series)


def main(args: Optional[list] = None):
    """Main CLI entry point."""
    app = CLIApplication()
    sys.exit(asyncio.run(app.run(args)))


if __name__ == "__main__":
    main()
