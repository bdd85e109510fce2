import { requestEstimate, requestHealth } from './api.js';
import type { OkEstimate } from './api.js';
import { SessionHistory, sparkline } from './history.js';
import { verdictColor } from './verdict.js';

export interface App {
  history: SessionHistory;
  /** Resolves when the health probe issued at startup has settled. */
  ready: Promise<void>;
  /** The in-flight estimate request, if any. */
  inflight: Promise<void> | null;
}

function el<T extends HTMLElement>(doc: Document, id: string): T {
  const node = doc.getElementById(id);
  if (!node) throw new Error(`missing page element #${id}`);
  return node as T;
}

function showBanner(banner: HTMLElement, kind: string, color: string, text: string): void {
  banner.className = `banner ${kind}`;
  banner.dataset.color = color;
  banner.textContent = text;
  banner.hidden = false;
}

function renderDimensions(list: HTMLElement, estimate: OkEstimate): void {
  list.innerHTML = '';
  const doc = list.ownerDocument;
  for (const fact of estimate.explanation.dimensions) {
    if (!fact.token || fact.token === '[]') continue; // empty dimensions say nothing
    const item = doc.createElement('li');
    item.textContent =
      `${fact.dimension} '${fact.token}' — used by ${fact.people_count} ` +
      `${fact.people_count === 1 ? 'person' : 'people'}`;
    list.appendChild(item);
  }
}

/** Wire the registration-demo page. The password goes into the request body of
 * POST /estimate and nowhere else: no storage, no URL, no analytics. */
export function initApp(doc: Document, baseUrl = ''): App {
  const form = el<HTMLFormElement>(doc, 'estimate-form');
  const passwordInput = el<HTMLInputElement>(doc, 'password');
  const usernameInput = el<HTMLInputElement>(doc, 'username');
  const submitButton = el<HTMLButtonElement>(doc, 'submit');
  const banner = el<HTMLElement>(doc, 'banner');
  const dimensionList = el<HTMLElement>(doc, 'dimensions');
  const historyBox = el<HTMLElement>(doc, 'history');
  const healthLine = el<HTMLElement>(doc, 'health');

  const history = new SessionHistory();

  const app: App = { history, ready: Promise.resolve(), inflight: null };

  app.ready = requestHealth(baseUrl).then(
    (health) => {
      healthLine.textContent =
        health.status === 'ok'
          ? `model of ${health.model_population} passwords, gamma ${health.gamma}`
          : 'service is still loading its model';
    },
    () => {
      healthLine.textContent = 'estimation service unreachable';
    },
  );

  async function submit(): Promise<void> {
    const password = passwordInput.value;
    if (!password) {
      showBanner(banner, 'neutral', 'none', 'Enter a password first.');
      return;
    }
    submitButton.disabled = true;
    try {
      const estimate = await requestEstimate(baseUrl, password, usernameInput.value.trim());
      if (estimate.status === 'ok') {
        showBanner(
          banner,
          `verdict-${estimate.classification}`,
          verdictColor(estimate.classification),
          estimate.explanation.message,
        );
        renderDimensions(dimensionList, estimate);
        history.add(estimate.bits_lower, estimate.classification);
        historyBox.innerHTML = sparkline(history.list());
      } else {
        showBanner(
          banner,
          'neutral',
          'none',
          `No estimate: this password is not in the model (nothing matched its ` +
            `${estimate.missing_dimension} dimension), so it is unlike anything ` +
            `in the training corpus.`,
        );
        dimensionList.innerHTML = '';
      }
    } catch {
      showBanner(
        banner,
        'retry',
        'none',
        'Could not reach the estimation service. Check the service and submit again.',
      );
    } finally {
      submitButton.disabled = false;
      app.inflight = null;
    }
  }

  form.addEventListener('submit', (event) => {
    event.preventDefault();
    if (app.inflight) return; // at most one request in flight
    app.inflight = submit();
  });

  return app;
}
