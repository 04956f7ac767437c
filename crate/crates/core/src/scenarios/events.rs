/// A wave-front event at the tube observers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub label: char,
    /// Path length from the excited boundary in units of `L`.
    pub distance: f64,
    /// Arrival time (s).
    pub time: f64,
    pub description: &'static str,
}

/// Expected arrivals in the impedance tube: foam at `[3L, 4L]`, tube length
/// `7L`, sender line at `2.5L`, receiver line at `4.5L`.
#[derive(Debug, Clone, PartialEq)]
pub struct EventTimeline {
    pub length_scale: f64,
    pub wave_speed: f64,
    pub events: Vec<Event>,
}

const EVENTS: [(char, f64, &str); 6] = [
    ('A', 2.5, "wave front arrives at left observer locations"),
    ('B', 3.5, "reflected wave front arrives at left observer locations"),
    ('C', 4.5, "transmitted wave front arrives at right observer locations"),
    ('D', 8.5, "twice reflected wave front arrives at left observer locations"),
    ('E', 9.5, "three times reflected wave front arrives at left observer locations"),
    ('F', 9.5, "reflected transmitted wave front arrives at right observer locations"),
];

impl EventTimeline {
    pub fn new(length_scale: f64, wave_speed: f64) -> Self {
        let events = EVENTS
            .iter()
            .map(|&(label, distance, description)| Event {
                label,
                distance,
                time: distance * length_scale / wave_speed,
                description,
            })
            .collect();
        Self { length_scale, wave_speed, events }
    }

    pub fn time(&self, label: char) -> f64 {
        self.events.iter().find(|e| e.label == label).map(|e| e.time).expect("known event label")
    }

    /// Reflectance window B→D and transmittance window C→F.
    pub fn windows(&self) -> RtWindows {
        RtWindows {
            reflectance: (self.time('B'), self.time('D')),
            transmittance: (self.time('C'), self.time('F')),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RtWindows {
    pub reflectance: (f64, f64),
    pub transmittance: (f64, f64),
}

pub fn event_window_attribution(timeline: &EventTimeline) -> RtWindows {
    timeline.windows()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tube() -> EventTimeline {
        let c = (0.101e6f64 / 1.225).sqrt();
        EventTimeline::new(0.05, c)
    }

    fn round3(v: f64) -> f64 {
        let e = v.abs().log10().floor() - 2.0;
        let s = 10f64.powf(e);
        (v / s).round() * s
    }

    #[test]
    fn printed_times_in_ms() {
        let t = tube();
        let expected = [('A', 0.435), ('B', 0.609), ('C', 0.784), ('D', 1.48), ('E', 1.65), ('F', 1.65)];
        for (label, ms) in expected {
            assert!((round3(t.time(label) * 1e3) - ms).abs() < 1e-9, "{label}: {}", t.time(label) * 1e3);
        }
    }

    #[test]
    fn windows_are_ordered() {
        let w = tube().windows();
        assert!(w.reflectance.0 < w.reflectance.1);
        assert!(w.transmittance.0 < w.transmittance.1);
        assert_eq!(event_window_attribution(&tube()), w);
    }

    #[test]
    fn doubling_speed_halves_times() {
        let a = tube();
        let b = EventTimeline::new(a.length_scale, 2.0 * a.wave_speed);
        for (x, y) in a.events.iter().zip(&b.events) {
            assert_eq!(x.time, 2.0 * y.time);
        }
    }
}
